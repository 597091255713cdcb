#ifndef CCDEG_FIXPOINT_HPP
#define CCDEG_FIXPOINT_HPP

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ccdeg/degree.hpp"

namespace ccdeg {

/// A box of nonzero degree. By the existence property it holds a fixed point
/// whenever the compatibility condition holds on it; `point` is the best
/// representative found and `residual` is |point - T point| at it.
struct FixedPointCertificate {
  Box box;
  int degree = 0;
  bool condition_holds = false;
  Vec point;
  double residual = std::numeric_limits<double>::infinity();
};

/// One split of the bisection tree: parent degree against the child degrees.
struct AuditEntry {
  Box parent;
  int degree = 0;
  Box left, right;
  int left_degree = 0, right_degree = 0;
  bool additive() const { return degree == left_degree + right_degree; }
};

struct LocalizeOptions {
  DegreeOptions degree;
  std::size_t max_boxes = 1u << 16;  ///< bound on processed boxes
  std::size_t condition_grid = 16;   ///< per-certificate condition scan
};

struct LocalizeResult {
  std::vector<FixedPointCertificate> certificates;
  int total_degree = 0;
  std::vector<AuditEntry> audit;
  std::size_t pruned = 0;     ///< degree-0 boxes certified zero-free
  std::size_t dropped = 0;    ///< degree-0 boxes that could not be certified zero-free
  std::size_t perturbed = 0;  ///< cuts moved off a zero

  bool additive() const {
    return std::all_of(audit.begin(), audit.end(), [](const AuditEntry& a) { return a.additive(); });
  }
  int certificate_degree_sum() const {
    int s = 0;
    for (const auto& c : certificates) s += c.degree;
    return s;
  }
  std::optional<FixedPointCertificate> best() const {
    if (certificates.empty()) return std::nullopt;
    return *std::min_element(certificates.begin(), certificates.end(),
                             [](const auto& a, const auto& b) { return a.residual < b.residual; });
  }

  /// Columns: box, degree, condition, point, residual.
  std::string to_csv() const {
    std::string s = "box,degree,condition,point,residual\n";
    for (const auto& c : certificates)
      s += c.box.str() + "," + std::to_string(c.degree) + "," + (c.condition_holds ? "holds" : "fails") + "," +
           fmt_vec(c.point) + "," + fmt_num(c.residual) + "\n";
    return s;
  }
};

namespace detail {

inline std::vector<Vec> box_corners(const Box& b) {
  if (b.dim() == 1) return {Vec{b[0].lo}, Vec{b[0].hi}};
  return {Vec{b[0].lo, b[1].lo}, Vec{b[0].hi, b[1].lo}, Vec{b[0].hi, b[1].hi}, Vec{b[0].lo, b[1].hi}};
}

/// Candidate with the smallest residual among corners, centre and interface points.
template <PointMap M>
std::pair<Vec, double> representative(const M& m, const Box& b) {
  std::vector<Vec> cand = box_corners(b);
  cand.push_back(b.center());
  for (const auto& p : m.interface_points(b, 16))
    if (b.contains(p)) cand.push_back(p);
  Vec best = cand.front();
  double res = std::numeric_limits<double>::infinity();
  for (const auto& x : cand) {
    const double r = norm(x - m.evaluate(x));
    if (r < res) {
      res = r;
      best = x;
    }
  }
  return {best, res};
}

}  // namespace detail

/// Recursive bisection of omega keeping boxes of nonzero degree.
///
/// Each split checks that the two child degrees add up to the parent's (the
/// audit). Cuts landing on a zero of x - env(x) are moved by
/// {+1, -1, +2, -2} * min_width / 16 before giving up with split_failure.
/// Only boundary well-definedness is required; the certificates carry their
/// own condition verdict.
template <PointMap M>
LocalizeResult localize_fixed_points(const M& m, const Box& omega, double min_width, const LocalizeOptions& opts = {}) {
  if (!(min_width > 0.0)) throw Error(ErrorKind::invalid_argument, "min_width must be positive");
  if (!m.domain().contains(omega, kPredicateTol))
    throw Error(ErrorKind::domain, "omega " + omega.str() + " outside " + m.domain().str());

  LocalizeResult r;
  r.total_degree = boundary_degree(m, omega, opts.degree);
  if (r.total_degree == 0) return r;

  const double delta = min_width / 16.0;
  const double offsets[5] = {0.0, delta, -delta, 2.0 * delta, -2.0 * delta};
  std::deque<std::pair<Box, int>> queue{{omega, r.total_degree}};
  std::size_t processed = 0;
  while (!queue.empty()) {
    auto [b, d] = queue.front();
    queue.pop_front();
    if (++processed > opts.max_boxes)
      throw Error(ErrorKind::refinement_exhausted, "more than " + std::to_string(opts.max_boxes) + " boxes");
    if (b.max_side() <= min_width) {
      FixedPointCertificate c;
      c.box = b;
      c.degree = d;
      c.condition_holds = check_condition(m, b, opts.condition_grid, opts.degree.membership_tol).holds();
      std::tie(c.point, c.residual) = detail::representative(m, b);
      r.certificates.push_back(std::move(c));
      continue;
    }
    const std::size_t ax = b.longest_axis();
    const double mid = b[ax].mid();
    bool split = false;
    for (double off : offsets) {
      const double cut = mid + off;
      if (!(cut > b[ax].lo && cut < b[ax].hi)) continue;
      const Box left = b.with_axis(ax, {b[ax].lo, cut});
      const Box right = b.with_axis(ax, {cut, b[ax].hi});
      std::string why;
      auto dl = detail::try_boundary_degree(m, left, opts.degree, why);
      auto dr = dl ? detail::try_boundary_degree(m, right, opts.degree, why) : std::nullopt;
      if (!dl || !dr) continue;
      if (off != 0.0) ++r.perturbed;
      r.audit.push_back({b, d, left, right, *dl, *dr});
      for (const auto& [child, dc] : {std::pair{left, *dl}, std::pair{right, *dr}}) {
        if (dc != 0) {
          queue.emplace_back(child, dc);
        } else if (certify_zero_free(m, child, 8)) {
          ++r.pruned;
        } else {
          ++r.dropped;
        }
      }
      split = true;
      break;
    }
    if (!split)
      throw Error(ErrorKind::split_failure, "every cut of " + b.str() + " meets a zero of x - env(x)");
  }
  std::sort(r.certificates.begin(), r.certificates.end(),
            [](const auto& a, const auto& b) { return a.box.lower() < b.box.lower(); });
  return r;
}

// ---------------------------------------------------------------------------
// Self-maps of a closed convex set through the metric projection.

/// Nearest point of `mset` to x.
inline Vec project(const ConvexBody& mset, const Vec& x) {
  if (mset.dim() == 1) {
    const Interval iv = mset.as_interval();
    return Vec{std::clamp(x[0], iv.lo, iv.hi)};
  }
  if (mset.distance(x) == 0.0) return x;
  const auto& v = mset.polygon();
  Vec best = v[0];
  double bd = norm(x - v[0]);
  const std::size_t edges = v.size() == 1 ? 0 : (v.size() == 2 ? 1 : v.size());
  for (std::size_t i = 0; i < edges; ++i) {
    const Vec& a = v[i];
    const Vec& b = v[(i + 1) % v.size()];
    const Vec ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(x - a, ab) / len2, 0.0, 1.0) : 0.0;
    const Vec p = a + t * ab;
    const double dd = norm(x - p);
    if (dd < bd) {
      bd = dd;
      best = p;
    }
  }
  return best;
}

/// T = F o r on a box B around M, r the metric projection onto M. T is
/// continuous wherever F is, agrees with F on M and maps B into M when F does.
class RetractedMap {
 public:
  RetractedMap(PiecewiseMap f, ConvexBody mset, Box work) : f_(std::move(f)), m_(std::move(mset)), work_(std::move(work)) {
    const Box bb = m_.bounding_box();
    if (!f_.domain().contains(bb, kPredicateTol))
      throw Error(ErrorKind::domain, "map domain " + f_.domain().str() + " does not contain " + bb.str());
    // a box-shaped M projects coordinatewise
    clamp_exact_ = m_.dim() == 1;
    if (m_.dim() == 2 && m_.polygon().size() == 4) {
      clamp_exact_ = true;
      for (const auto& v : m_.polygon())
        if ((v[0] != bb[0].lo && v[0] != bb[0].hi) || (v[1] != bb[1].lo && v[1] != bb[1].hi)) clamp_exact_ = false;
    }
  }

  const Box& domain() const noexcept { return work_; }
  std::size_t output_dim() const noexcept { return f_.output_dim(); }
  const ConvexBody& set() const noexcept { return m_; }
  const PiecewiseMap& inner() const noexcept { return f_; }

  Vec evaluate(const Vec& x) const { return f_.evaluate(project(m_, x)); }
  MapValueSet adjacent_values(const Vec& x, double tol) const { return f_.adjacent_values(project(m_, x), tol); }

  Box enclose(const Box& b) const { return f_.enclose(image_box(b)); }

  std::vector<Vec> interface_points(const Box& b, std::size_t n) const {
    std::vector<Vec> out;
    for (const auto& p : f_.interface_points(image_box(b), n))
      if (b.contains(p)) out.push_back(p);
    return out;
  }

 private:
  // a box containing r(b)
  Box image_box(const Box& b) const {
    const Box bb = m_.bounding_box();
    if (!clamp_exact_) return bb;
    std::vector<Interval> ax;
    for (std::size_t i = 0; i < b.dim(); ++i)
      ax.push_back({std::clamp(b[i].lo, bb[i].lo, bb[i].hi), std::clamp(b[i].hi, bb[i].lo, bb[i].hi)});
    return Box(std::span<const Interval>(ax));
  }

  PiecewiseMap f_;
  ConvexBody m_;
  Box work_;
  bool clamp_exact_ = false;
};

static_assert(PointMap<RetractedMap>);

struct FixedPointOptions {
  double min_width = 1e-8;
  std::size_t grid = 0;  ///< 0 picks 1000 (1-d) or 100 (2-d)
  LocalizeOptions localize;
};

struct SchauderResult {
  FixedPointCertificate certificate;
  Box work;
  LocalizeResult localization;
  ConditionReport condition;
  std::size_t self_map_points = 0;
};

/// Points of a grid over M's bounding box that lie in M, plus F's interface points in M.
inline std::vector<Vec> set_samples(const PiecewiseMap& f, const ConvexBody& mset, std::size_t grid) {
  const Box bb = mset.bounding_box();
  std::vector<Vec> pts;
  for (const auto& x : grid_points(bb, grid))
    if (contains(mset, x, kPredicateTol)) pts.push_back(x);
  if (bb.min_side() > 0.0 || bb.dim() == 1)
    for (const auto& x : f.interface_points(bb, grid))
      if (contains(mset, x, kPredicateTol)) pts.push_back(x);
  for (const auto& v : mset.vertices()) pts.push_back(v);
  return pts;
}

/// Fixed point of F in a closed convex M, given F(M) ⊂ M and the
/// compatibility condition on M (both certified on a grid of M).
inline SchauderResult schauder_fixed_point(const PiecewiseMap& f, const ConvexBody& mset,
                                           const FixedPointOptions& opts = {}) {
  if (f.input_dim() != mset.dim() || f.output_dim() != mset.dim())
    throw Error(ErrorKind::dimension_mismatch, "F and M must live in the same space");
  const std::size_t grid = opts.grid ? opts.grid : (mset.dim() == 1 ? 1000 : 100);
  const double tol = opts.localize.degree.membership_tol;

  SchauderResult r;
  const std::vector<Vec> pts = set_samples(f, mset, grid);
  for (const auto& x : pts) {
    for (const auto& v : f.adjacent_values(x, kPredicateTol).values)
      if (!contains(mset, v, tol))
        throw Error(ErrorKind::self_map_failure,
                    "F(" + fmt_vec(x) + ") = (" + fmt_vec(v) + ") leaves " + mset.str());
    ++r.self_map_points;
  }
  r.condition = check_condition_at(f, pts, tol);
  if (!r.condition.holds()) {
    const auto& v = r.condition.violations.front();
    throw Error(ErrorKind::condition_failure, "compatibility condition fails on M at (" + fmt_vec(v.x) + ")");
  }

  const Box bb = mset.bounding_box();
  std::vector<Interval> ax;
  for (std::size_t i = 0; i < bb.dim(); ++i) {
    const double pad = std::max(0.5, 0.25 * bb[i].width());
    ax.push_back({bb[i].lo - pad, bb[i].hi + pad});
  }
  r.work = Box(std::span<const Interval>(ax));
  const RetractedMap t(f, mset, r.work);
  r.localization = localize_fixed_points(t, r.work, opts.min_width, opts.localize);

  // fixed points of T lie in M, so the projected representative is at least as good
  std::optional<FixedPointCertificate> best;
  for (auto c : r.localization.certificates) {
    const Vec p = project(mset, c.point);
    const double res = norm(p - f.evaluate(p));
    if (res <= c.residual) {
      c.point = p;
      c.residual = res;
    }
    if (contains(mset, c.point, tol) && (!best || c.residual < best->residual)) best = c;
  }
  if (!best) throw Error(ErrorKind::self_map_failure, "no certificate representative lies in " + mset.str());
  r.certificate = *best;
  return r;
}

// ---------------------------------------------------------------------------
// A-priori bound search.

struct SchaeferResult {
  double radius = 0.0;
  std::vector<double> rejected;  ///< radii tried before the accepted one
  FixedPointCertificate certificate;
  LocalizeResult localization;
  ConditionReport condition;
};

/// True when x ∉ σ env(x) for all σ in [0, 1], checked on consecutive pairs
/// of the grid σ_i = i / steps through the hull of σ_i env(x) ∪ σ_{i+1} env(x).
inline bool escapes_scaled_envelope(const ConvexBody& env, const Vec& x, std::size_t steps, double tol) {
  const std::vector<Vec> verts = env.vertices();
  for (std::size_t i = 0; i < steps; ++i) {
    const double s0 = static_cast<double>(i) / static_cast<double>(steps);
    const double s1 = static_cast<double>(i + 1) / static_cast<double>(steps);
    std::vector<Vec> pts;
    for (const auto& v : verts) {
      pts.push_back(s0 * v);
      pts.push_back(s1 * v);
    }
    if (contains(convex_hull(pts, kPredicateTol), x, tol)) return false;
  }
  return true;
}

/// Looks for R in {1, 2, 4, ...} up to r_max with x ∉ σ env(x) on the
/// boundary of [-R, R]^d, then localizes a fixed point there (the degree on
/// that box is 1 through the homotopy σ T).
inline SchaeferResult schaefer_search(const PiecewiseMap& m, double r_max, const FixedPointOptions& opts = {}) {
  const std::size_t d = m.input_dim();
  if (d != m.output_dim() || d > 2) throw Error(ErrorKind::dimension_mismatch, "self-map of R^1 or R^2 required");
  const double tol = opts.localize.degree.membership_tol;

  SchaeferResult r;
  for (double radius = 1.0; radius <= r_max; radius *= 2.0) {
    const Box ball = Box::cube(d, -radius, radius);
    if (!m.domain().contains(ball, kPredicateTol)) break;
    std::vector<Vec> pts = d == 1 ? box_boundary_walk(ball, 1) : box_boundary_walk(ball, 64);
    for (const auto& p : m.interface_points(ball, 64))
      if (!ball.interior_contains(p)) pts.push_back(p);
    const bool ok = std::all_of(pts.begin(), pts.end(), [&](const Vec& x) {
      return escapes_scaled_envelope(envelope_exact(m, x).value, x, 64, tol);
    });
    if (!ok) {
      r.rejected.push_back(radius);
      continue;
    }
    r.radius = radius;
    const std::size_t grid = opts.grid ? opts.grid : (d == 1 ? 1000 : 100);
    r.condition = check_condition(m, ball, grid, tol);
    if (!r.condition.holds())
      throw Error(ErrorKind::condition_failure, "compatibility condition fails on " + ball.str() + " at (" +
                                                    fmt_vec(r.condition.violations.front().x) + ")");
    r.localization = localize_fixed_points(m, ball, opts.min_width, opts.localize);
    auto best = r.localization.best();
    if (!best) throw Error(ErrorKind::not_well_defined, "degree on " + ball.str() + " is 0, expected 1");
    r.certificate = *best;
    return r;
  }
  throw Error(ErrorKind::no_admissible_radius, "no admissible R <= " + fmt_num(r_max));
}

}  // namespace ccdeg

#endif  // CCDEG_FIXPOINT_HPP
