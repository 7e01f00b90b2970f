#include "irsa/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return irsa::run_tool(argc, argv, std::cout, std::cerr);
}
