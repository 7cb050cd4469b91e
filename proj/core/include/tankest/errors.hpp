#pragma once

#include <stdexcept>
#include <string>

namespace tankest {

// Error categories. The CLI maps each one to a stable exit code, so throw
// the most specific type that applies.

/// Bad request: unknown identifiers, malformed flags, out-of-domain arguments.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data that violates a format or invariant (sample files, results CSV).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A (N, k) setting that cannot be sampled, i.e. k > N.
class InfeasibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed-form moments disagree with the enumeration oracle.
class OracleMismatchError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Full enumeration was requested for more subsets than the oracle allows.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace tankest
