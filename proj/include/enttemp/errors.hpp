#pragma once

#include <stdexcept>
#include <string>

namespace enttemp {

/// Precondition violated by the caller (bad shape, out-of-range index, non-Hermitian input ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds what dense routines can hold in memory.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A question is infeasible (e.g. more EPR pairs than the Schmidt rank allows).
class Infeasible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Expansion is ill-defined because the leading Schmidt value is degenerate.
class Degeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace enttemp
