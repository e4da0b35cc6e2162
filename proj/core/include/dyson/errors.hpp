#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dyson {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two points closer than the collision tolerance (non-simple configuration).
class CollisionError : public Error {
 public:
  using Error::Error;
};

/// A quadrature or series did not reach the requested accuracy.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Discretized operator is not a valid DPP kernel (spectrum outside [0, 1]).
class DiscretizationError : public Error {
 public:
  using Error::Error;
};

/// Linear system too close to singular; carries the condition estimate.
class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Step control gave up. Carries the time and the flat coordinates at failure.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time, std::vector<double> state)
      : Error(what), time_(time), state_(std::move(state)) {}
  double time() const noexcept { return time_; }
  const std::vector<double>& state() const noexcept { return state_; }

 private:
  double time_;
  std::vector<double> state_;
};

/// Input validation failure naming the offending field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace dyson
