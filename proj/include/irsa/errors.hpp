#pragma once

#include <stdexcept>
#include <string>

namespace irsa {

/// Parameters outside an operation's domain (M > 2^n0, unsupported field degree, ...).
class InvalidParameters : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// More active users than codewords in a frame.
class FrameOverload : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A decoder reached a state that correct SIC cannot produce.
class InternalInconsistency : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// Zero or several matching subsets in a slot a BCH book should resolve uniquely.
class CodebookPropertyViolation : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

class OracleTooLarge : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace irsa
