#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dynint {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string kind() const { return "error"; }
};

// Evaluation left the domain of a formula (pole, log of a non-positive value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  std::string kind() const override { return "domain"; }
};

class DimensionError : public Error {
 public:
  using Error::Error;
  std::string kind() const override { return "dimension"; }
};

// A derivative was requested from a black-box callable without the
// finite-difference opt-in.
class DerivativeUnavailable : public Error {
 public:
  using Error::Error;
  std::string kind() const override { return "derivative_unavailable"; }
};

class GuardViolation : public Error {
 public:
  GuardViolation(const std::string& what, long step) : Error(what), step_(step) {}
  std::string kind() const override { return "guard"; }
  long step() const { return step_; }

 private:
  long step_;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time_reached)
      : Error(what), time_reached_(time_reached) {}
  std::string kind() const override { return "integration"; }
  double time_reached() const { return time_reached_; }

 private:
  double time_reached_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
  std::string kind() const override { return "config"; }
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
  std::string kind() const override { return "convergence"; }
};

}  // namespace dynint
