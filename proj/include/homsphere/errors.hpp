#pragma once

#include <stdexcept>
#include <string>

namespace homsphere {

/// Input outside the domain of an operation (bad triple ordering, angle at an
/// excluded endpoint, point outside the chart where V != +-Y3, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A user-supplied field or scalar function produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Geodesic integration could not proceed (bad step, non-finite state).
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace homsphere
