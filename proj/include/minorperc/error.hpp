#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace minorperc {

/// Invalid or infeasible input parameters (odd n*k for a regular graph, p outside [0,1], ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A documented precondition or internal invariant was violated.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace minorperc
