#ifndef CCDEG_CORE_HPP
#define CCDEG_CORE_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>

namespace ccdeg {

/// Default tolerance of every geometric predicate and of vertex deduplication.
inline constexpr double kPredicateTol = 1e-12;

/// Default tolerance for the membership test `x in envelope(x)`.
inline constexpr double kMembershipTol = 1e-9;

/// Largest coordinate count carried by a Vec. Maps live in dimension 1 or 2;
/// the third slot holds the homotopy / time parameter of an augmented map.
inline constexpr std::size_t kMaxDim = 3;

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  empty_hull,
  domain,
  cover_violated,
  parse,
  no_convergence,
  not_well_defined,
  refinement_exhausted,
  split_failure,
  self_map_failure,
  condition_failure,
  no_admissible_radius,
  curve_contact_unclassified,
  uncovered_interface,
  step_underflow,
  quadrature,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::empty_hull: return "empty hull";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::cover_violated: return "cover violated";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::no_convergence: return "no convergence";
    case ErrorKind::not_well_defined: return "not well-defined";
    case ErrorKind::refinement_exhausted: return "refinement exhausted";
    case ErrorKind::split_failure: return "split failure";
    case ErrorKind::self_map_failure: return "self-map certification failure";
    case ErrorKind::condition_failure: return "condition failure";
    case ErrorKind::no_admissible_radius: return "no admissible R";
    case ErrorKind::curve_contact_unclassified: return "curve contact unclassified";
    case ErrorKind::uncovered_interface: return "interface not covered by any curve";
    case ErrorKind::step_underflow: return "step-size underflow";
    case ErrorKind::quadrature: return "quadrature nonconvergence";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) +
                           (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Small fixed-capacity real vector.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n, double fill = 0.0) : n_(n) {
    if (n > kMaxDim) throw Error(ErrorKind::invalid_argument, "vector dimension > 3");
    v_.fill(0.0);
    for (std::size_t i = 0; i < n; ++i) v_[i] = fill;
  }
  Vec(std::initializer_list<double> xs) : n_(xs.size()) {
    if (n_ > kMaxDim) throw Error(ErrorKind::invalid_argument, "vector dimension > 3");
    std::copy(xs.begin(), xs.end(), v_.begin());
  }

  std::size_t size() const noexcept { return n_; }
  double& operator[](std::size_t i) noexcept { return v_[i]; }
  double operator[](std::size_t i) const noexcept { return v_[i]; }
  const double* data() const noexcept { return v_.data(); }
  const double* begin() const noexcept { return v_.data(); }
  const double* end() const noexcept { return v_.data() + n_; }

  Vec& operator+=(const Vec& o) {
    for (std::size_t i = 0; i < n_; ++i) v_[i] += o.v_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (std::size_t i = 0; i < n_; ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (std::size_t i = 0; i < n_; ++i) v_[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.n_ != b.n_) return false;
    for (std::size_t i = 0; i < a.n_; ++i)
      if (a.v_[i] != b.v_[i]) return false;
    return true;
  }

  /// Lexicographic order; used to merge concurrent scan results deterministically.
  friend bool operator<(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  std::array<double, kMaxDim> v_{};
  std::size_t n_ = 0;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw Error(ErrorKind::dimension_mismatch,
                std::string(what) + " (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

/// Shortest round-trip decimal form; byte-stable across runs.
inline std::string fmt_num(double v) {
  if (v == 0.0) return "0";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), ptr);
}

/// Vectors print as space-separated coordinates.
inline std::string fmt_vec(const Vec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += fmt_num(v[i]);
  }
  return s;
}

}  // namespace ccdeg

#endif  // CCDEG_CORE_HPP
