#ifndef CCDEG_INTERVAL_HPP
#define CCDEG_INTERVAL_HPP

#include <cmath>
#include <limits>
#include <numbers>

#include "ccdeg/core.hpp"

namespace ccdeg {

/// Closed real interval [lo, hi] with natural-extension arithmetic.
///
/// Results are widened by one ulp on each side after every operation, which
/// is enough to absorb round-to-nearest error in the enclosures used for
/// zero exclusion. This is not a substitute for a directed-rounding library.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT: implicit point interval
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  static Interval entire() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
  bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }
  bool is_empty() const { return !(lo <= hi); }
  bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

namespace detail {

inline Interval widen(Interval x) {
  if (std::isnan(x.lo) || std::isnan(x.hi)) return Interval::entire();
  return {std::nextafter(x.lo, -std::numeric_limits<double>::infinity()),
          std::nextafter(x.hi, std::numeric_limits<double>::infinity())};
}

inline Interval hull4(double a, double b, double c, double d) {
  return {std::min(std::min(a, b), std::min(c, d)), std::max(std::max(a, b), std::max(c, d))};
}

}  // namespace detail

inline Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval operator+(const Interval& a, const Interval& b) {
  return detail::widen({a.lo + b.lo, a.hi + b.hi});
}
inline Interval operator-(const Interval& a, const Interval& b) {
  return detail::widen({a.lo - b.hi, a.hi - b.lo});
}
inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval operator*(const Interval& a, const Interval& b) {
  // 0 * inf must not poison a degenerate zero factor
  auto mul = [](double x, double y) { return (x == 0.0 || y == 0.0) ? 0.0 : x * y; };
  return detail::widen(detail::hull4(mul(a.lo, b.lo), mul(a.lo, b.hi), mul(a.hi, b.lo), mul(a.hi, b.hi)));
}

inline Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains(0.0)) return Interval::entire();
  Interval inv{1.0 / b.hi, 1.0 / b.lo};
  return a * detail::widen(inv);
}

inline Interval abs(const Interval& a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return -a;
  return {0.0, std::max(-a.lo, a.hi)};
}

inline Interval min(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}
inline Interval max(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval exp(const Interval& a) { return detail::widen({std::exp(a.lo), std::exp(a.hi)}); }

inline Interval sin(const Interval& a) {
  constexpr double pi = std::numbers::pi;
  if (!a.is_finite() || a.width() >= 2.0 * pi) return {-1.0, 1.0};
  double lo = std::min(std::sin(a.lo), std::sin(a.hi));
  double hi = std::max(std::sin(a.lo), std::sin(a.hi));
  // maxima at pi/2 + 2k pi, minima at -pi/2 + 2k pi
  double kmax = std::ceil((a.lo - pi / 2) / (2 * pi));
  if (pi / 2 + 2 * pi * kmax <= a.hi) hi = 1.0;
  double kmin = std::ceil((a.lo + pi / 2) / (2 * pi));
  if (-pi / 2 + 2 * pi * kmin <= a.hi) lo = -1.0;
  Interval r = detail::widen({lo, hi});
  return {std::max(r.lo, -1.0), std::min(r.hi, 1.0)};
}

inline Interval cos(const Interval& a) {
  return sin(Interval{a.lo + std::numbers::pi / 2, a.hi + std::numbers::pi / 2});
}

/// Power with an arbitrary exponent interval. Integer point exponents handle
/// negative bases; otherwise the base must be nonnegative.
inline Interval pow(const Interval& base, const Interval& expo) {
  if (expo.lo == expo.hi && std::floor(expo.lo) == expo.lo && std::abs(expo.lo) < 1e6) {
    const double n = expo.lo;
    if (n == 0.0) return {1.0, 1.0};
    if (n < 0.0) return Interval{1.0} / pow(base, Interval{-n});
    const bool even = std::fmod(n, 2.0) == 0.0;
    double a = std::pow(base.lo, n), b = std::pow(base.hi, n);
    if (!even) return detail::widen({a, b});
    if (base.lo >= 0.0) return detail::widen({a, b});
    if (base.hi <= 0.0) return detail::widen({b, a});
    return detail::widen({0.0, std::max(a, b)});
  }
  if (base.lo < 0.0) return Interval::entire();
  double c[4] = {std::pow(base.lo, expo.lo), std::pow(base.lo, expo.hi), std::pow(base.hi, expo.lo),
                 std::pow(base.hi, expo.hi)};
  return detail::widen(detail::hull4(c[0], c[1], c[2], c[3]));
}

}  // namespace ccdeg

#endif  // CCDEG_INTERVAL_HPP
