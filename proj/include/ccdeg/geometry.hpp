#ifndef CCDEG_GEOMETRY_HPP
#define CCDEG_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ccdeg/core.hpp"
#include "ccdeg/interval.hpp"

namespace ccdeg {

/// Axis-aligned closed box, one interval per axis.
class Box {
 public:
  Box() = default;
  Box(std::initializer_list<Interval> axes) : n_(axes.size()) {
    if (n_ == 0 || n_ > kMaxDim) throw Error(ErrorKind::invalid_argument, "box dimension must be 1..3");
    std::copy(axes.begin(), axes.end(), ax_.begin());
    validate();
  }
  explicit Box(std::span<const Interval> axes) : n_(axes.size()) {
    if (n_ == 0 || n_ > kMaxDim) throw Error(ErrorKind::invalid_argument, "box dimension must be 1..3");
    std::copy(axes.begin(), axes.end(), ax_.begin());
    validate();
  }

  static Box cube(std::size_t dim, double lo, double hi) {
    std::array<Interval, kMaxDim> a{};
    for (std::size_t i = 0; i < dim; ++i) a[i] = {lo, hi};
    return Box(std::span<const Interval>(a.data(), dim));
  }

  std::size_t dim() const noexcept { return n_; }
  const Interval& operator[](std::size_t i) const noexcept { return ax_[i]; }
  std::span<const Interval> axes() const noexcept { return {ax_.data(), n_}; }

  Vec lower() const {
    Vec v(n_);
    for (std::size_t i = 0; i < n_; ++i) v[i] = ax_[i].lo;
    return v;
  }
  Vec upper() const {
    Vec v(n_);
    for (std::size_t i = 0; i < n_; ++i) v[i] = ax_[i].hi;
    return v;
  }
  Vec center() const {
    Vec v(n_);
    for (std::size_t i = 0; i < n_; ++i) v[i] = ax_[i].mid();
    return v;
  }
  double min_side() const {
    double m = ax_[0].width();
    for (std::size_t i = 1; i < n_; ++i) m = std::min(m, ax_[i].width());
    return m;
  }
  double max_side() const {
    double m = ax_[0].width();
    for (std::size_t i = 1; i < n_; ++i) m = std::max(m, ax_[i].width());
    return m;
  }
  std::size_t longest_axis() const {
    std::size_t k = 0;
    for (std::size_t i = 1; i < n_; ++i)
      if (ax_[i].width() > ax_[k].width()) k = i;
    return k;
  }

  bool contains(const Vec& x, double tol = 0.0) const {
    if (x.size() != n_) return false;
    for (std::size_t i = 0; i < n_; ++i)
      if (!ax_[i].contains(x[i], tol)) return false;
    return true;
  }
  bool contains(const Box& b, double tol = 0.0) const {
    if (b.n_ != n_) return false;
    for (std::size_t i = 0; i < n_; ++i)
      if (b.ax_[i].lo < ax_[i].lo - tol || b.ax_[i].hi > ax_[i].hi + tol) return false;
    return true;
  }
  bool interior_contains(const Vec& x) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (!(x[i] > ax_[i].lo && x[i] < ax_[i].hi)) return false;
    return true;
  }

  Vec clamp(const Vec& x) const {
    Vec y = x;
    for (std::size_t i = 0; i < n_; ++i) y[i] = std::clamp(x[i], ax_[i].lo, ax_[i].hi);
    return y;
  }

  Box with_axis(std::size_t i, Interval v) const {
    Box b = *this;
    b.ax_[i] = v;
    b.validate();
    return b;
  }

  /// Box scaled about the origin by `s` (s may be negative).
  Box scaled(double s) const {
    Box b = *this;
    for (std::size_t i = 0; i < n_; ++i) {
      double a = s * ax_[i].lo, c = s * ax_[i].hi;
      b.ax_[i] = {std::min(a, c), std::max(a, c)};
    }
    return b;
  }

  friend bool operator==(const Box& a, const Box& b) {
    if (a.n_ != b.n_) return false;
    for (std::size_t i = 0; i < a.n_; ++i)
      if (!(a.ax_[i] == b.ax_[i])) return false;
    return true;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i) s += " x ";
      s += "[" + fmt_num(ax_[i].lo) + "," + fmt_num(ax_[i].hi) + "]";
    }
    return s;
  }

 private:
  void validate() const {
    for (std::size_t i = 0; i < n_; ++i)
      if (!(ax_[i].lo <= ax_[i].hi))
        throw Error(ErrorKind::invalid_argument, "box axis with lo > hi");
  }

  std::array<Interval, kMaxDim> ax_{};
  std::size_t n_ = 0;
};

/// Points of a uniform grid over `b` with `n` intervals per axis (n+1 nodes),
/// in lexicographic order.
inline std::vector<Vec> grid_points(const Box& b, std::size_t n) {
  n = std::max<std::size_t>(n, 1);
  std::vector<Vec> pts;
  auto node = [&](std::size_t axis, std::size_t k) {
    if (k == n) return b[axis].hi;
    return b[axis].lo + b[axis].width() * static_cast<double>(k) / static_cast<double>(n);
  };
  if (b.dim() == 1) {
    for (std::size_t i = 0; i <= n; ++i) pts.push_back(Vec{node(0, i)});
  } else if (b.dim() == 2) {
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j <= n; ++j) pts.push_back(Vec{node(0, i), node(1, j)});
  } else {
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t k = 0; k <= n; ++k) pts.push_back(Vec{node(0, i), node(1, j), node(2, k)});
  }
  return pts;
}

/// Counterclockwise closed walk around a 2-d box, `per_side` steps per edge.
/// The first corner is (lo, lo) and is not repeated at the end.
inline std::vector<Vec> box_boundary_walk(const Box& b, std::size_t per_side) {
  std::vector<Vec> pts;
  if (b.dim() == 1) return {Vec{b[0].lo}, Vec{b[0].hi}};
  const double x0 = b[0].lo, x1 = b[0].hi, y0 = b[1].lo, y1 = b[1].hi;
  const Vec corners[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  for (int e = 0; e < 4; ++e) {
    const Vec& p = corners[e];
    const Vec& q = corners[(e + 1) % 4];
    for (std::size_t k = 0; k < per_side; ++k) {
      double s = static_cast<double>(k) / static_cast<double>(per_side);
      pts.push_back(Vec{p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])});
    }
  }
  return pts;
}

/// Closed convex subset of R^1 or R^2.
///
/// In one dimension this is an interval. In two dimensions it is stored as a
/// counterclockwise vertex list with no repeated or collinear consecutive
/// vertices: one vertex is a point, two a segment, three or more a polygon.
class ConvexBody {
 public:
  ConvexBody() = default;

  static ConvexBody interval(double lo, double hi) {
    if (!(lo <= hi)) throw Error(ErrorKind::invalid_argument, "interval with lo > hi");
    ConvexBody c;
    c.dim_ = 1;
    c.iv_ = {lo, hi};
    return c;
  }
  static ConvexBody point(const Vec& p) {
    if (p.size() == 1) return interval(p[0], p[0]);
    if (p.size() != 2) throw Error(ErrorKind::invalid_argument, "convex bodies live in R^1 or R^2");
    ConvexBody c;
    c.dim_ = 2;
    c.verts_ = {p};
    return c;
  }
  /// Trusts that `ccw` is already a reduced counterclockwise vertex list.
  static ConvexBody polygon_unchecked(std::vector<Vec> ccw) {
    ConvexBody c;
    c.dim_ = 2;
    c.verts_ = std::move(ccw);
    return c;
  }

  std::size_t dim() const noexcept { return dim_; }
  bool is_point(double tol = 0.0) const {
    if (dim_ == 1) return iv_.width() <= tol;
    for (const auto& v : verts_)
      if (norm(v - verts_[0]) > tol) return false;
    return true;
  }

  const Interval& as_interval() const { return iv_; }
  const std::vector<Vec>& polygon() const { return verts_; }

  /// Extreme points as vectors (1 or 2 in R^1).
  std::vector<Vec> vertices() const {
    if (dim_ == 1) {
      if (iv_.lo == iv_.hi) return {Vec{iv_.lo}};
      return {Vec{iv_.lo}, Vec{iv_.hi}};
    }
    return verts_;
  }

  Box bounding_box() const {
    if (dim_ == 1) return Box{iv_};
    Interval bx{verts_[0][0]}, by{verts_[0][1]};
    for (const auto& v : verts_) {
      bx = hull(bx, Interval{v[0]});
      by = hull(by, Interval{v[1]});
    }
    return Box{bx, by};
  }

  /// Euclidean distance from `x` to the body.
  double distance(const Vec& x) const {
    require_same_dim(x.size(), dim_, "point vs convex body");
    if (dim_ == 1) {
      if (x[0] < iv_.lo) return iv_.lo - x[0];
      if (x[0] > iv_.hi) return x[0] - iv_.hi;
      return 0.0;
    }
    const std::size_t n = verts_.size();
    if (n == 1) return norm(x - verts_[0]);
    if (n >= 3) {
      bool inside = true;
      for (std::size_t i = 0; i < n && inside; ++i)
        if (cross2(verts_[i], verts_[(i + 1) % n], x) < 0.0) inside = false;
      if (inside) return 0.0;
    }
    double d = std::numeric_limits<double>::infinity();
    const std::size_t edges = (n == 2) ? 1 : n;
    for (std::size_t i = 0; i < edges; ++i) d = std::min(d, segment_distance(x, verts_[i], verts_[(i + 1) % n]));
    return d;
  }

  /// Image under v -> a + s v.
  ConvexBody affine(const Vec& a, double s) const {
    if (dim_ == 1) {
      double p = a[0] + s * iv_.lo, q = a[0] + s * iv_.hi;
      return interval(std::min(p, q), std::max(p, q));
    }
    std::vector<Vec> out;
    out.reserve(verts_.size());
    for (const auto& v : verts_) out.push_back(a + s * v);
    // scaling by a negative factor in the plane is a rotation by pi: order stays CCW
    if (s == 0.0) out.resize(1);
    return polygon_unchecked(std::move(out));
  }

  std::string str() const {
    if (dim_ == 1) return "[" + fmt_num(iv_.lo) + ";" + fmt_num(iv_.hi) + "]";
    std::string s = "poly(";
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      if (i) s += "|";
      s += fmt_vec(verts_[i]);
    }
    return s + ")";
  }

  static double segment_distance(const Vec& x, const Vec& a, const Vec& b) {
    Vec ab = b - a;
    double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? std::clamp(dot(x - a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(x - (a + t * ab));
  }

 private:
  std::size_t dim_ = 0;
  Interval iv_{};
  std::vector<Vec> verts_;
};

/// Smallest convex body containing `points`. Points closer than `tol` are
/// merged and vertices within `tol` of the line through their neighbours are
/// dropped, so the result is strictly convex up to `tol`.
inline ConvexBody convex_hull(std::span<const Vec> points, double tol = kPredicateTol) {
  if (points.empty()) throw Error(ErrorKind::empty_hull, "");
  const std::size_t d = points[0].size();
  for (const auto& p : points) require_same_dim(p.size(), d, "hull input");
  if (d == 1) {
    double lo = points[0][0], hi = points[0][0];
    for (const auto& p : points) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    if (hi - lo <= tol) hi = lo;
    return ConvexBody::interval(lo, hi);
  }
  if (d != 2) throw Error(ErrorKind::invalid_argument, "convex hull supports R^1 and R^2");

  std::vector<Vec> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  // near-duplicates that are not sort neighbours are removed by the turn test below
  std::vector<Vec> uniq;
  for (const auto& p : pts)
    if (uniq.empty() || norm(p - uniq.back()) > tol) uniq.push_back(p);
  if (uniq.size() == 1) return ConvexBody::point(uniq[0]);

  // Andrew's monotone chain; a middle vertex within tol of the chord is dropped.
  auto turns_left = [tol](const Vec& o, const Vec& a, const Vec& b) {
    double base = norm(b - o);
    if (base == 0.0) return false;
    return cross2(o, a, b) / base > tol;
  };
  std::vector<Vec> h(2 * uniq.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    while (k >= 2 && !turns_left(h[k - 2], h[k - 1], uniq[i])) --k;
    h[k++] = uniq[i];
  }
  for (std::size_t i = uniq.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && !turns_left(h[k - 2], h[k - 1], uniq[i])) --k;
    h[k++] = uniq[i];
  }
  h.resize(k - 1);
  if (h.size() == 2 && norm(h[0] - h[1]) <= tol) h.resize(1);
  return ConvexBody::polygon_unchecked(std::move(h));
}

inline ConvexBody convex_hull(std::initializer_list<Vec> points, double tol = kPredicateTol) {
  return convex_hull(std::span<const Vec>(points.begin(), points.size()), tol);
}

/// Hausdorff distance between two convex bodies. The distance to a convex set
/// is a convex function, so its maximum over a body is attained at a vertex.
inline double hausdorff_distance(const ConvexBody& a, const ConvexBody& b) {
  require_same_dim(a.dim(), b.dim(), "hausdorff operands");
  if (a.dim() == 1) {
    return std::max(std::abs(a.as_interval().lo - b.as_interval().lo),
                    std::abs(a.as_interval().hi - b.as_interval().hi));
  }
  double h = 0.0;
  for (const auto& v : a.vertices()) h = std::max(h, b.distance(v));
  for (const auto& v : b.vertices()) h = std::max(h, a.distance(v));
  return h;
}

/// True iff dist(x, c) <= tol.
inline bool contains(const ConvexBody& c, const Vec& x, double tol = 0.0) {
  return c.distance(x) <= tol;
}

/// True iff every point of `inner` lies within `tol` of `outer`.
inline bool contains(const ConvexBody& outer, const ConvexBody& inner, double tol = 0.0) {
  require_same_dim(outer.dim(), inner.dim(), "containment operands");
  for (const auto& v : inner.vertices())
    if (outer.distance(v) > tol) return false;
  return true;
}

}  // namespace ccdeg

#endif  // CCDEG_GEOMETRY_HPP
