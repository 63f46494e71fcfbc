#pragma once

#include <stdexcept>
#include <string>

namespace gelfand {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (weight grammar, CSV).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input is well formed but violates a mathematical precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A comparison/envelope check was called outside the hypotheses it needs.
class HypothesisError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The adaptive integrator could not reach the requested endpoint.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double radius_reached)
      : Error(what), radius_reached_(radius_reached) {}
  double radius_reached() const noexcept { return radius_reached_; }

 private:
  double radius_reached_;
};

// The two Morse counting methods returned different counts.
class MethodDisagreement : public Error {
 public:
  MethodDisagreement(const std::string& what, int sturm_count, int fd_count)
      : Error(what), sturm_count_(sturm_count), fd_count_(fd_count) {}
  int sturm_count() const noexcept { return sturm_count_; }
  int fd_count() const noexcept { return fd_count_; }

 private:
  int sturm_count_;
  int fd_count_;
};

}  // namespace gelfand
