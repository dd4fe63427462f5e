#pragma once

#include <stdexcept>
#include <string>

namespace isoflow {

/// Exact integer or rational arithmetic left the 128-bit range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// A precondition on an argument was violated (wrong length, odd size, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two exact routes that must agree did not, or a value that must be an
/// integer was not. Always indicates a bug.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A state lies off the smooth part of the variety (a sign is undefined).
class DegeneratePointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive integration failed; carries the time at which it gave up.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace isoflow
