#pragma once

#include "irsa/config.hpp"

#include <iosfwd>
#include <set>
#include <string>

namespace irsa {

/// Flag values that take precedence over the config file.
struct Overrides {
  std::string out;
  std::string seed;
  std::string workers;
  std::string frames;
  std::string tol;
};

const std::set<std::string>& simulate_keys();
const std::set<std::string>& analyze_keys();
const std::set<std::string>& threshold_keys();

void apply_overrides(RunConfig& config, const Overrides& flags);

/// Each command validates the whole config before computing anything and
/// throws ConfigError on bad input. Per-point failures of a sweep are written
/// to `diag` and reported through the return value (false).
bool cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& diag);

/// mode = pi-u: U, pi_exact, pi_half, pi_lower, pi_asymptotic per (K, nu, U).
/// mode = regions: region boundaries over beta_grid.
void cmd_analyze(const RunConfig& config, std::ostream& out);

/// beta, scheme, G_star, R_sum for each beta on beta_grid and each scheme.
void cmd_threshold(const RunConfig& config, std::ostream& out);

/// Runs the tool with the given arguments. Returns the process exit code.
int run_tool(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace irsa
