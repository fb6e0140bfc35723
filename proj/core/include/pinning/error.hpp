#pragma once

#include <stdexcept>
#include <string>

namespace pinning {

/// Bad input: out-of-range parameters, sizes beyond a cap, malformed tables.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The operation is well-defined only for some laws (e.g. full support,
/// log-convexity, stretched family) and the given law does not qualify.
class NotApplicable : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Numerical procedure failed to reach its stated guarantee.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace pinning
