#pragma once

// Shared error types and small numeric helpers used across the library.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace sysrel {

inline constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();
inline constexpr double inf_value = std::numeric_limits<double>::infinity();

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model parameter violates its constraint; reports the offending field.
class InvalidParameter : public Error {
 public:
  InvalidParameter(const std::string& field, const std::string& constraint)
      : Error("invalid parameter '" + field + "': " + constraint), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// An evaluation point lies outside the function's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quantity is undefined at the requested point (survival at 0 or 1, etc.).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not defined for this family or configuration.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A combinatorial expansion would exceed the supported component count.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// A quadrature routine could not meet its error budget.
class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

/// log(1 - exp(x)) for x <= 0, stable at both ends of the range.
inline double log1mexp(double x) {
  if (x > 0.0) throw DomainError("log1mexp requires x <= 0");
  if (x == 0.0) return -inf_value;
  constexpr double ln2 = 0.6931471805599453;
  return x > -ln2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

/// log(exp(x) - 1) for x > 0, safe for arguments far beyond overflow.
inline double log_expm1(double x) {
  if (x <= 0.0) throw DomainError("log_expm1 requires x > 0");
  return x + log1mexp(-x);
}

/// Compensated accumulator; keeps alternating-sign subset sums accurate.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

inline bool is_finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
inline bool is_finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace sysrel
