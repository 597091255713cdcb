#ifndef CCDEG_MAPS_HPP
#define CCDEG_MAPS_HPP

#include <cmath>
#include <concepts>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ccdeg/expr.hpp"
#include "ccdeg/geometry.hpp"

namespace ccdeg {

/// g(x) <= 0, or g(x) < 0 when strict.
struct Constraint {
  Expr g;
  bool strict = false;
};

/// Conjunction of constraints. The closure description relaxes every strict
/// inequality to a non-strict one.
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<Constraint> cs) : cs_(std::move(cs)) {}

  static Region everywhere() { return Region{}; }

  const std::vector<Constraint>& constraints() const noexcept { return cs_; }

  bool contains(const Vec& x) const {
    for (const auto& c : cs_) {
      const double v = c.g.eval(x);
      if (c.strict ? !(v < 0.0) : !(v <= 0.0)) return false;
    }
    return true;
  }

  bool closure_contains(const Vec& x, double tol) const {
    for (const auto& c : cs_)
      if (!(c.g.eval(x) <= tol)) return false;
    return true;
  }

  /// Conservative: false only when some constraint is certainly violated on `b`.
  bool may_meet(const Box& b, double tol) const {
    for (const auto& c : cs_)
      if (c.g.enclose(b.axes()).lo > tol) return false;
    return true;
  }

 private:
  std::vector<Constraint> cs_;
};

struct Piece {
  Region region;
  std::vector<Expr> value;  ///< one expression per output coordinate
};

/// Finite set of map values, deduplicated; returned by adjacency queries.
struct MapValueSet {
  std::vector<Vec> values;

  void insert(const Vec& v, double tol) {
    for (const auto& w : values)
      if (norm(v - w) <= tol) return;
    values.push_back(v);
  }
  bool singleton() const { return values.size() == 1; }
};

namespace detail {

/// Roots of `phi` on [lo, hi], found by sign changes on an n-step sampling
/// and bisection in the coordinate itself down to adjacent doubles, so exact
/// zeros that are representable are hit exactly.
template <class F>
void line_roots(F&& phi, double lo, double hi, std::size_t n, std::vector<double>& out) {
  auto node = [&](std::size_t i) {
    return i == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  };
  double s0 = lo, f0 = phi(lo);
  if (f0 == 0.0) out.push_back(lo);
  for (std::size_t i = 1; i <= n; ++i) {
    const double s1 = node(i);
    const double f1 = phi(s1);
    if (f1 == 0.0) {
      out.push_back(s1);
    } else if (f0 != 0.0 && ((f0 < 0.0) != (f1 < 0.0)) && std::isfinite(f0) && std::isfinite(f1)) {
      double a = s0, b = s1, fa = f0;
      bool exact = false;
      for (int it = 0; it < 2100; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = phi(m);
        if (fm == 0.0) {
          a = b = m;
          exact = true;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      out.push_back(exact ? a : (std::abs(phi(a)) <= std::abs(phi(b)) ? a : b));
    }
    s0 = s1;
    f0 = f1;
  }
}

inline void dedup_sorted(std::vector<Vec>& pts, double tol) {
  std::sort(pts.begin(), pts.end());
  std::vector<Vec> out;
  for (const auto& p : pts) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend() && it != out.rbegin() + 8; ++it)
      if (norm(p - *it) <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  pts = std::move(out);
}

}  // namespace detail

/// A map on a closed box given by finitely many regions, each with a
/// closed-form piece function.
///
/// Pieces are tried in declaration order; the first region containing a point
/// owns it. Each piece function must extend continuously to the closure of its
/// region; exact envelopes depend on that contract.
class PiecewiseMap {
 public:
  PiecewiseMap() = default;
  PiecewiseMap(Box domain, std::size_t output_dim, std::vector<Piece> pieces)
      : domain_(std::move(domain)), out_dim_(output_dim), pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw Error(ErrorKind::invalid_argument, "map without pieces");
    for (const auto& p : pieces_) {
      if (p.value.size() != out_dim_)
        throw Error(ErrorKind::dimension_mismatch, "piece value arity differs from output dimension");
      for (const auto& e : p.value)
        if (e.arity() > domain_.dim()) throw Error(ErrorKind::invalid_argument, "piece refers to unknown variable");
      for (const auto& c : p.region.constraints())
        if (c.g.arity() > domain_.dim()) throw Error(ErrorKind::invalid_argument, "region refers to unknown variable");
    }
  }

  /// Single-piece (continuous) map.
  static PiecewiseMap continuous(Box domain, std::vector<Expr> value) {
    const std::size_t m = value.size();
    return PiecewiseMap(std::move(domain), m, {Piece{Region::everywhere(), std::move(value)}});
  }

  const Box& domain() const noexcept { return domain_; }
  std::size_t input_dim() const noexcept { return domain_.dim(); }
  std::size_t output_dim() const noexcept { return out_dim_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

  Vec piece_value(std::size_t k, const Vec& x) const {
    Vec y(out_dim_);
    for (std::size_t i = 0; i < out_dim_; ++i) y[i] = pieces_[k].value[i].eval(x);
    return y;
  }

  /// Index of the owning piece, or nullopt when no region contains x.
  std::optional<std::size_t> owner(const Vec& x) const {
    for (std::size_t k = 0; k < pieces_.size(); ++k)
      if (pieces_[k].region.contains(x)) return k;
    return std::nullopt;
  }

  Vec evaluate(const Vec& x) const {
    check_domain(x);
    auto k = owner(x);
    if (!k) throw Error(ErrorKind::cover_violated, "no region contains (" + fmt_vec(x) + ")");
    return piece_value(*k, x);
  }

  /// Values of every piece whose owned set has x in its closure.
  ///
  /// Ownership is first-match, so a region closure holding x is not enough
  /// once an earlier region closure also holds x: the earlier piece may mask
  /// every point near x. Such a piece counts only if it owns x or one of the
  /// probe points a relative distance 1e-10 or 1e-8 away.
  MapValueSet adjacent_values(const Vec& x, double tol = kPredicateTol) const {
    MapValueSet s;
    check_domain(x);
    const auto own = owner(x);
    if (!own) throw Error(ErrorKind::cover_violated, "no region contains (" + fmt_vec(x) + ")");
    s.insert(piece_value(*own, x), tol);
    std::vector<Vec> probes;
    bool masked = false;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      const bool near = pieces_[k].region.closure_contains(x, tol);
      if (near && k != *own) {
        bool adjacent = !masked;
        if (!adjacent) {
          if (probes.empty()) probes = probe_points(x);
          for (const auto& p : probes)
            if (owner(p) == k) {
              adjacent = true;
              break;
            }
        }
        if (adjacent) s.insert(piece_value(k, x), tol);
      }
      masked = masked || near;
    }
    return s;
  }

  /// Interval box enclosing every value the map (and so its envelope) takes on `b`.
  Box enclose(const Box& b) const {
    std::array<Interval, kMaxDim> acc{};
    bool any = false;
    for (const auto& p : pieces_) {
      if (!p.region.may_meet(b, kPredicateTol)) continue;
      for (std::size_t i = 0; i < out_dim_; ++i) {
        Interval v = p.value[i].enclose(b.axes());
        acc[i] = any ? hull(acc[i], v) : v;
      }
      any = true;
    }
    if (!any) {
      for (std::size_t i = 0; i < out_dim_; ++i) acc[i] = Interval::entire();
    }
    for (std::size_t i = 0; i < out_dim_; ++i)
      if (std::isnan(acc[i].lo) || std::isnan(acc[i].hi)) acc[i] = Interval::entire();
    return Box(std::span<const Interval>(acc.data(), out_dim_));
  }

  /// Zeros of the region constraints inside `scan`, located along the axis
  /// lines of an n-step grid (the whole interval in one dimension).
  std::vector<Vec> interface_points(const Box& scan, std::size_t n) const {
    std::vector<Vec> out;
    const std::size_t samples = std::max<std::size_t>(n, 64);
    std::vector<double> roots;
    for (const auto& p : pieces_) {
      for (const auto& c : p.region.constraints()) {
        if (scan.dim() == 1) {
          roots.clear();
          detail::line_roots([&](double s) { return c.g.eval(Vec{s}); }, scan[0].lo, scan[0].hi, samples, roots);
          for (double s : roots) out.push_back(Vec{s});
        } else if (scan.dim() == 2) {
          for (const auto& node : grid_points(scan, n)) {
            // each node spawns the horizontal line at its y and the vertical line at its x,
            // but only once per line
            if (node[0] == scan[0].lo) {
              roots.clear();
              const double y = node[1];
              detail::line_roots([&](double s) { return c.g.eval(Vec{s, y}); }, scan[0].lo, scan[0].hi, samples, roots);
              for (double s : roots) out.push_back(Vec{s, y});
            }
            if (node[1] == scan[1].lo) {
              roots.clear();
              const double x = node[0];
              detail::line_roots([&](double s) { return c.g.eval(Vec{x, s}); }, scan[1].lo, scan[1].hi, samples, roots);
              for (double s : roots) out.push_back(Vec{x, s});
            }
          }
        }
      }
    }
    detail::dedup_sorted(out, 0.0);
    return out;
  }

  /// The map c * T.
  PiecewiseMap scaled(double c) const {
    std::vector<Piece> ps = pieces_;
    for (auto& p : ps)
      for (auto& e : p.value) e = Expr(c) * e;
    return PiecewiseMap(domain_, out_dim_, std::move(ps));
  }

  /// Slice with input coordinate `index` fixed to `value`.
  PiecewiseMap bind(std::size_t index, double value) const {
    if (domain_.dim() < 2) throw Error(ErrorKind::invalid_argument, "cannot slice a one-dimensional map");
    std::vector<Interval> axes;
    for (std::size_t i = 0; i < domain_.dim(); ++i)
      if (i != index) axes.push_back(domain_[i]);
    std::vector<Piece> ps;
    for (const auto& p : pieces_) {
      std::vector<Constraint> cs;
      for (const auto& c : p.region.constraints()) cs.push_back({c.g.bind(index, value), c.strict});
      std::vector<Expr> vs;
      for (const auto& e : p.value) vs.push_back(e.bind(index, value));
      ps.push_back({Region(std::move(cs)), std::move(vs)});
    }
    return PiecewiseMap(Box(std::span<const Interval>(axes)), out_dim_, std::move(ps));
  }

 private:
  void check_domain(const Vec& x) const {
    if (x.size() != domain_.dim())
      throw Error(ErrorKind::dimension_mismatch, "point dimension differs from map domain");
    if (!domain_.contains(x, kPredicateTol))
      throw Error(ErrorKind::domain, "(" + fmt_vec(x) + ") outside " + domain_.str());
  }

  // Points around x inside the domain along axis, diagonal and (in the plane)
  // 16 evenly spread directions. Axis directions are exact so that regions
  // like `x == 0` are hit.
  std::vector<Vec> probe_points(const Vec& x) const {
    std::vector<Vec> dirs;
    const std::size_t d = x.size();
    if (d == 2) {
      for (int k = 0; k < 16; ++k) {
        const double a = std::numbers::pi * k / 8.0;
        double c = std::cos(a), s = std::sin(a);
        if (std::abs(c) < 1e-15) c = 0.0;
        if (std::abs(s) < 1e-15) s = 0.0;
        dirs.push_back(Vec{c, s});
      }
    } else {
      // every nonzero vector of {-1, 0, 1}^d
      std::size_t total = 1;
      for (std::size_t i = 0; i < d; ++i) total *= 3;
      for (std::size_t code = 0; code < total; ++code) {
        Vec v(d);
        std::size_t c = code;
        for (std::size_t i = 0; i < d; ++i, c /= 3) v[i] = static_cast<double>(c % 3) - 1.0;
        if (norm(v) > 0.0) dirs.push_back((1.0 / norm(v)) * v);
      }
    }
    const double scale = std::max(1.0, norm_inf(x));
    std::vector<Vec> out;
    for (double r : {1e-10, 1e-8})
      for (const auto& u : dirs) {
        const Vec p = x + (r * scale) * u;
        if (domain_.contains(p)) out.push_back(p);
      }
    return out;
  }

  Box domain_;
  std::size_t out_dim_ = 0;
  std::vector<Piece> pieces_;
};

/// What envelope, degree and fixed-point routines need from a map.
template <class M>
concept PointMap = requires(const M& m, const Vec& x, const Box& b, double tol, std::size_t n) {
  { m.domain() } -> std::convertible_to<Box>;
  { m.output_dim() } -> std::convertible_to<std::size_t>;
  { m.evaluate(x) } -> std::convertible_to<Vec>;
  { m.adjacent_values(x, tol) } -> std::convertible_to<MapValueSet>;
  { m.enclose(b) } -> std::convertible_to<Box>;
  { m.interface_points(b, n) } -> std::convertible_to<std::vector<Vec>>;
};

static_assert(PointMap<PiecewiseMap>);

/// First grid point covered by no region, if any.
inline std::optional<Vec> find_cover_gap(const PiecewiseMap& m, std::size_t per_axis) {
  for (const auto& x : grid_points(m.domain(), per_axis))
    if (!m.owner(x)) return x;
  return std::nullopt;
}

/// First grid point where some piece is non-finite on the closure of its
/// region. A sampled proxy for the closure-continuity contract.
inline std::optional<Vec> find_closure_defect(const PiecewiseMap& m, std::size_t per_axis) {
  for (const auto& x : grid_points(m.domain(), per_axis))
    for (std::size_t k = 0; k < m.pieces().size(); ++k)
      if (m.pieces()[k].region.closure_contains(x, kPredicateTol))
        for (double v : m.piece_value(k, x))
          if (!std::isfinite(v)) return x;
  return std::nullopt;
}

/// Piecewise-constant map on an interval: values[i] on the i-th cell, where
/// cell i ends at breaks[i] (inclusive) and the last cell runs to the domain end.
/// Convenience for building step maps in code.
inline PiecewiseMap step_map(Interval domain, const std::vector<double>& breaks, const std::vector<double>& values) {
  if (values.size() != breaks.size() + 1) throw Error(ErrorKind::invalid_argument, "step map needs one more value than breaks");
  std::vector<Piece> ps;
  const Expr x = Expr::var(0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<Constraint> cs;
    if (i > 0) cs.push_back({Expr(breaks[i - 1]) - x, true});  // x > b_{i-1}
    if (i < breaks.size()) cs.push_back({x - Expr(breaks[i]), false});  // x <= b_i
    ps.push_back({Region(std::move(cs)), {Expr(values[i])}});
  }
  return PiecewiseMap(Box{domain}, 1, std::move(ps));
}

}  // namespace ccdeg

#endif  // CCDEG_MAPS_HPP
