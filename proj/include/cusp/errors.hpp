#pragma once

#include <stdexcept>
#include <string>

namespace cusp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain where an operation is defined.
class DomainError : public Error {
public:
  using Error::Error;
};

/// The kernel was requested at a point congruent to 0 mod 2π.
class SingularityError : public Error {
public:
  using Error::Error;
};

/// A quadrature or series did not reach the requested accuracy.
class AccuracyError : public Error {
public:
  AccuracyError(const std::string& what, double estimate)
      : Error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

private:
  double estimate_;
};

/// The grid cannot represent the requested number of modes.
class AliasingError : public Error {
public:
  using Error::Error;
};

class NonsmoothPointError : public Error {
public:
  using Error::Error;
};

class RootFindError : public Error {
public:
  using Error::Error;
};

/// Newton iteration failed; carries the last residual max-norm.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

private:
  double last_residual_;
  int iterations_;
};

/// The Newton matrix became numerically singular (expected close to the crest).
class NearSingularError : public Error {
public:
  NearSingularError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public Error {
public:
  using Error::Error;
};

/// Invalid configuration value; `field()` names the offending key.
class ConfigError : public Error {
public:
  ConfigError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace cusp
