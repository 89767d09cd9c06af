#pragma once
#include <stdexcept>
#include <string>

namespace radsing {

// Input outside the domain of an operation (bad t, bad r, inadmissible exponent combination).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Problem data violating one of the structural assumptions. `assumption` names the inequality.
struct SpecError : std::invalid_argument {
  std::string key, assumption;
  SpecError(std::string key_, std::string assumption_, const std::string& msg)
      : std::invalid_argument(msg), key(std::move(key_)), assumption(std::move(assumption_)) {}
};

// An integral that does not converge where a finite value was required.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iteration, bracketing or stabilisation that failed to converge.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace radsing
