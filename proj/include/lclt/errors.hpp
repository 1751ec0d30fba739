#pragma once

#include <stdexcept>
#include <string>

namespace lclt {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact enumeration would exceed the configured state or object budget.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A verification was requested on a model that does not meet its hypotheses.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lclt
