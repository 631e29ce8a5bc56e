#pragma once

#include <stdexcept>
#include <string>

namespace polaron2d {

// Error taxonomy. Every failure mode an operation documents maps to one of
// these; callers that want to distinguish catch the concrete type.

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside an operation's mathematical domain (tau <= -mu, log of a
// nonpositive argument, negative radicand, ...).
struct DomainError : Error {
  using Error::Error;
};

// A lattice enumeration would exceed the configured mode cap.
struct ResourceLimitError : Error {
  using Error::Error;
};

// An adaptive scheme could not reach the requested tolerance within its budget.
struct ConvergenceError : Error {
  using Error::Error;
};

// A caller-asserted property (e.g. monotonicity of a test function) failed a
// runtime check.
struct ContractViolationError : Error {
  using Error::Error;
};

// A tail sum or integral did not converge.
struct DivergenceError : Error {
  using Error::Error;
};

// A root finder found no sign change on its search interval.
struct NoSolutionError : Error {
  using Error::Error;
};

// Parameters outside the regime in which an equation is solvable
// (e.g. a subtraction r too large for the current mu/|E_B|).
struct RegimeError : Error {
  using Error::Error;
};

// Initial bracket invalid and widening failed.
struct BracketError : Error {
  using Error::Error;
};

// Division by a vanishing quantity (G = 0 at a summand).
struct SingularError : Error {
  using Error::Error;
};

// CLI / scan configuration problems (maps to exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace polaron2d
