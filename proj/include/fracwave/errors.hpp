#pragma once

#include <stdexcept>
#include <string>

namespace fracwave {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quadrature or series did not reach its requested tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double estimate)
      : std::runtime_error(what + " (error estimate " + std::to_string(estimate) + ")"),
        estimate_(estimate) {}

  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// Loss of positivity, overflow or another breakdown inside a numerical kernel.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent study/solver configuration (nesting, mismatched alpha, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The denominator certificate for a contour failed; the contour must not be used.
class CertificateError : public std::runtime_error {
 public:
  CertificateError(const std::string& what, double margin)
      : std::runtime_error(what), margin_(margin) {}

  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

}  // namespace fracwave
