#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace dunkl {

/// A real number stored as sign * exp(log_abs), so kernel values far outside
/// the double range can still be multiplied and compared.
struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static LogValue from_log(double log_abs, int sign = 1) {
    if (sign == 0) return {};
    return {log_abs, sign > 0 ? 1 : -1};
  }

  static LogValue from_value(double v) {
    if (v == 0.0) return {};
    return {std::log(std::abs(v)), v > 0 ? 1 : -1};
  }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  bool is_zero() const { return sign == 0; }

  friend LogValue operator*(LogValue a, LogValue b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.log_abs + b.log_abs, a.sign * b.sign};
  }

  friend LogValue operator/(LogValue a, LogValue b) {
    if (b.sign == 0) return {std::numeric_limits<double>::infinity(), a.sign == 0 ? 1 : a.sign};
    if (a.sign == 0) return {};
    return {a.log_abs - b.log_abs, a.sign * b.sign};
  }

  friend LogValue operator+(LogValue a, LogValue b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    if (a.log_abs < b.log_abs) std::swap(a, b);
    const double r = std::exp(b.log_abs - a.log_abs);
    if (a.sign == b.sign) return {a.log_abs + std::log1p(r), a.sign};
    if (r == 1.0) return {};
    return {a.log_abs + std::log1p(-r), a.sign};
  }

  friend LogValue operator-(LogValue a, LogValue b) {
    b.sign = -b.sign;
    return a + b;
  }

  LogValue& operator*=(LogValue b) { return *this = *this * b; }
  LogValue& operator+=(LogValue b) { return *this = *this + b; }
};

}  // namespace dunkl
