#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

namespace hcalg {

using cplx = std::complex<double>;

// Complex number with an out-of-band binary exponent: value = mant * 2^exp.
// Witness coefficients routinely sit near 2^-10000, far outside double range,
// while still being multiplied back up to O(1) by long shifts.
class XComplex {
 public:
  XComplex() = default;
  XComplex(cplx z) : m_(z), e_(0) { normalize(); }  // NOLINT(implicit)
  XComplex(double x) : XComplex(cplx(x, 0.0)) {}     // NOLINT(implicit)

  static XComplex from_parts(cplx mant, std::int64_t e) {
    XComplex r;
    r.m_ = mant;
    r.e_ = e;
    r.normalize();
    return r;
  }

  // exp(logabs) * e^{i arg}
  static XComplex polar_log(double logabs, double arg) {
    if (logabs == -std::numeric_limits<double>::infinity()) return {};
    double k = std::floor(logabs / kLn2);
    double frac = logabs - k * kLn2;
    return from_parts(std::polar(std::exp(frac), arg), static_cast<std::int64_t>(k));
  }

  bool is_zero() const { return m_.real() == 0.0 && m_.imag() == 0.0; }
  bool is_finite() const { return std::isfinite(m_.real()) && std::isfinite(m_.imag()); }

  const cplx& mantissa() const { return m_; }
  std::int64_t exponent() const { return e_; }

  // Converts to a plain complex; may overflow to inf or underflow to 0.
  cplx value() const {
    if (is_zero()) return {};
    if (e_ > 4000) return {std::copysign(HUGE_VAL, m_.real()), std::copysign(HUGE_VAL, m_.imag())};
    if (e_ < -4000) return {};
    int e = static_cast<int>(e_);
    return {std::ldexp(m_.real(), e), std::ldexp(m_.imag(), e)};
  }

  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(m_)) + static_cast<double>(e_) * kLn2;
  }
  double arg() const { return std::arg(m_); }
  double abs() const { return std::exp(log_abs()); }

  XComplex operator-() const { return from_parts(-m_, e_); }
  XComplex conj() const { return from_parts(std::conj(m_), e_); }

  XComplex scaled_log(double logf) const {
    if (is_zero()) return {};
    double k = std::floor(logf / kLn2);
    double frac = logf - k * kLn2;
    return from_parts(m_ * std::exp(frac), e_ + static_cast<std::int64_t>(k));
  }

  // Principal branch power z^t for real t.
  XComplex pow(double t) const {
    if (is_zero()) return {};
    return polar_log(t * log_abs(), t * arg());
  }

  friend XComplex operator*(const XComplex& a, const XComplex& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return from_parts(a.m_ * b.m_, a.e_ + b.e_);
  }
  friend XComplex operator/(const XComplex& a, const XComplex& b) {
    if (a.is_zero()) return {};
    return from_parts(a.m_ / b.m_, a.e_ - b.e_);
  }
  friend XComplex operator+(const XComplex& a, const XComplex& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.e_ >= b.e_) return from_parts(a.m_ + shift(b.m_, b.e_ - a.e_), a.e_);
    return from_parts(b.m_ + shift(a.m_, a.e_ - b.e_), b.e_);
  }
  friend XComplex operator-(const XComplex& a, const XComplex& b) { return a + (-b); }
  XComplex& operator+=(const XComplex& b) { return *this = *this + b; }
  XComplex& operator*=(const XComplex& b) { return *this = *this * b; }

  static constexpr double kLn2 = 0.69314718055994530941723212145818;

 private:
  static cplx shift(const cplx& z, std::int64_t d) {
    if (d < -1100) return {};
    int k = static_cast<int>(d);
    return {std::ldexp(z.real(), k), std::ldexp(z.imag(), k)};
  }

  void normalize() {
    if (!is_finite()) return;
    double s = std::max(std::abs(m_.real()), std::abs(m_.imag()));
    if (s == 0.0) {
      m_ = {};
      e_ = 0;
      return;
    }
    int k = 0;
    std::frexp(s, &k);
    m_ = {std::ldexp(m_.real(), -k), std::ldexp(m_.imag(), -k)};
    e_ += k;
  }

  cplx m_{};
  std::int64_t e_ = 0;
};

}  // namespace hcalg
