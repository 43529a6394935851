#pragma once

#include <stdexcept>
#include <string>

namespace orbitbench {

// A computation would exceed the configured memory/time budget, or integer
// coordinate arithmetic would overflow.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs violate an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs are well-formed but carry no usable data (no visits, no in-domain
// pairs, every entropy box excluded, ...).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A construction produced output that breaks one of its guaranteed
// properties. Always an implementation bug, never a user error.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace orbitbench
