#pragma once

#include <stdexcept>
#include <string>

namespace opnorm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A moment/exponential integral does not converge for the requested law.
struct DivergenceError : Error {
  using Error::Error;
};

// The law has no finite psi_2 parameter.
struct NotSubgaussianError : Error {
  using Error::Error;
};

// An exhaustive computation would exceed its enumeration budget.
struct BudgetExceededError : Error {
  using Error::Error;
};

// An operation's stated precondition does not hold for the given inputs.
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace opnorm
