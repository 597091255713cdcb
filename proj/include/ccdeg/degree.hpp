#ifndef CCDEG_DEGREE_HPP
#define CCDEG_DEGREE_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ccdeg/envelope.hpp"

namespace ccdeg {

struct DegreeOptions {
  double membership_tol = kMembershipTol;  ///< condition scans
  double boundary_tol = kPredicateTol;     ///< 0 must be farther than this from x - env(x) on the boundary
  std::size_t condition_grid = 0;  ///< 0 picks 1000 (1-d) or 200 (2-d)
  bool check_condition = true;
  std::size_t refinement = 16;           ///< initial boundary samples per side (2-d)
  std::size_t max_samples = 1u << 20;    ///< boundary sample budget (2-d)
};

inline std::size_t condition_grid_for(const DegreeOptions& o, std::size_t dim) {
  if (o.condition_grid) return o.condition_grid;
  return dim == 1 ? 1000 : 200;
}

struct BoundarySample {
  Vec x;
  ConvexBody enclosure;  ///< x - env(x)
  double distance;       ///< distance of the enclosure from 0
};

/// deg(I - T, omega) with its certification trail.
///
/// `boundary_degree` is the degree of I - env computed from boundary data; it
/// exists whenever the boundary enclosures exclude 0. `degree` is set only
/// when, in addition, the compatibility condition holds on the closure.
struct DegreeReport {
  Box omega;
  std::optional<int> degree;
  std::optional<int> boundary_degree;
  bool well_defined = false;
  std::vector<BoundarySample> boundary;
  std::optional<ConditionReport> condition;
  std::vector<std::string> notes;

  std::string to_text() const {
    std::string s = "omega: " + omega.str() + "\n";
    s += "boundary degree: " + (boundary_degree ? std::to_string(*boundary_degree) : std::string("-")) + "\n";
    s += "well-defined: " + std::string(well_defined ? "yes" : "no") + "\n";
    s += "degree: " + (degree ? std::to_string(*degree) : std::string("-")) + "\n";
    s += "boundary samples: " + std::to_string(boundary.size()) + "\n";
    if (condition) {
      s += "condition: " + std::string(condition->holds() ? "holds" : "fails") + " (" +
           std::to_string(condition->scanned.size()) + " points)\n";
      for (const auto& v : condition->violations)
        s += "  violation at x=(" + fmt_vec(v.x) + ") env=" + v.envelope.str() + " Tx=(" + fmt_vec(v.tx) + ")\n";
    }
    for (const auto& n : notes) s += "note: " + n + "\n";
    return s;
  }

  /// Columns: x, enclosure, distance (boundary certificate).
  std::string to_csv() const {
    std::string s = "x,enclosure,distance\n";
    for (const auto& b : boundary) s += fmt_vec(b.x) + "," + b.enclosure.str() + "," + fmt_num(b.distance) + "\n";
    return s;
  }
};

namespace detail {

template <PointMap M>
BoundarySample boundary_sample(const M& m, const Vec& x, double tol) {
  ConvexBody enc = envelope_exact(m, x).value.affine(x, -1.0);
  const double d = enc.distance(Vec(x.size(), 0.0));
  if (d <= tol)
    throw Error(ErrorKind::not_well_defined,
                "0 in x - env(x) at boundary point (" + fmt_vec(x) + "), enclosure " + enc.str());
  return {x, enc, d};
}

template <PointMap M>
void attach_condition(const M& m, const Box& omega, const DegreeOptions& opts, DegreeReport& r) {
  r.well_defined = true;
  if (opts.check_condition) {
    r.condition = check_condition(m, omega, condition_grid_for(opts, omega.dim()), opts.membership_tol);
    if (!r.condition->holds()) {
      r.well_defined = false;
      r.notes.push_back("compatibility condition fails at " + std::to_string(r.condition->violations.size()) +
                        " scanned point(s); only the degree of I - env is reported");
    }
  } else {
    r.notes.push_back("condition not checked; degree is the boundary degree of I - env");
  }
  if (r.well_defined) r.degree = r.boundary_degree;
}

inline void require_square(std::size_t in, std::size_t out) {
  if (in != out) throw Error(ErrorKind::dimension_mismatch, "degree needs a self-map of R^d");
}

}  // namespace detail

/// Sign rule on an interval [a, b]: with A = a - env(a) and B = b - env(b),
/// degree +1 if A < 0 < B, -1 if B < 0 < A, 0 when both share a sign.
template <PointMap M>
DegreeReport degree_1d(const M& m, const Box& omega, const DegreeOptions& opts = {}) {
  if (omega.dim() != 1) throw Error(ErrorKind::dimension_mismatch, "degree_1d needs an interval");
  detail::require_square(m.domain().dim(), m.output_dim());
  if (!m.domain().contains(omega, kPredicateTol))
    throw Error(ErrorKind::domain, "omega " + omega.str() + " outside " + m.domain().str());

  DegreeReport r;
  r.omega = omega;
  const BoundarySample a = detail::boundary_sample(m, Vec{omega[0].lo}, opts.boundary_tol);
  const BoundarySample b = detail::boundary_sample(m, Vec{omega[0].hi}, opts.boundary_tol);
  r.boundary = {a, b};
  const Interval A = a.enclosure.as_interval(), B = b.enclosure.as_interval();
  if (A.hi < 0.0 && B.lo > 0.0) r.boundary_degree = 1;
  else if (B.hi < 0.0 && A.lo > 0.0) r.boundary_degree = -1;
  else r.boundary_degree = 0;
  detail::attach_condition(m, omega, opts, r);
  return r;
}

namespace detail {

inline double angle_step(const Vec& g0, const Vec& g1) {
  const double c = g0[0] * g1[0] + g0[1] * g1[1];
  const double s = g0[0] * g1[1] - g0[1] * g1[0];
  return std::atan2(s, c);
}

template <PointMap M>
struct Winder {
  const M& m;
  double tol;
  double min_step;
  std::size_t budget;
  std::size_t samples = 0;
  std::size_t jumps = 0;
  double total = 0.0;

  Vec g(const Vec& x) const { return x - m.evaluate(x); }

  // Accumulate the winding of g along the segment [p, q].
  void walk(const Vec& p, const Vec& gp, const Vec& q, const Vec& gq) {
    const double d = angle_step(gp, gq);
    if (std::abs(d) < std::numbers::pi / 2) {
      total += d;
      return;
    }
    if (norm(q - p) > min_step) {
      if (++samples > budget)
        throw Error(ErrorKind::refinement_exhausted, "angle increments still >= pi/2 after the sample budget");
      const Vec mid = 0.5 * (p + q);
      const Vec gm = g(mid);
      if (norm(gm) <= tol) throw Error(ErrorKind::not_well_defined, "boundary zero near (" + fmt_vec(mid) + ")");
      walk(p, gp, mid, gm);
      walk(mid, gm, q, gq);
      return;
    }
    // A jump across an interface: the segment between the one-sided values is
    // the envelope enclosure there, and must avoid 0.
    const double dist = ConvexBody::segment_distance(Vec{0.0, 0.0}, gp, gq);
    if (dist <= tol)
      throw Error(ErrorKind::not_well_defined, "envelope enclosure of a boundary jump at (" + fmt_vec(p) + ") contains 0");
    ++jumps;
    total += d;
  }
};

}  // namespace detail

/// Winding number of g(x) = x - T x around 0 along the counterclockwise
/// boundary of a 2-d box. Steps are bisected until each angle increment is
/// below pi/2; steps that cannot shrink further are interface jumps certified
/// by their envelope enclosure.
template <PointMap M>
DegreeReport degree_2d(const M& m, const Box& omega, const DegreeOptions& opts = {}) {
  if (omega.dim() != 2) throw Error(ErrorKind::dimension_mismatch, "degree_2d needs a 2-d box");
  detail::require_square(m.domain().dim(), m.output_dim());
  if (!m.domain().contains(omega, kPredicateTol))
    throw Error(ErrorKind::domain, "omega " + omega.str() + " outside " + m.domain().str());
  if (!(omega.min_side() > 0.0)) throw Error(ErrorKind::invalid_argument, "degenerate box");

  DegreeReport r;
  r.omega = omega;
  const std::size_t per_side = std::max<std::size_t>(opts.refinement, 1);
  const std::vector<Vec> walk = box_boundary_walk(omega, per_side);
  for (const auto& x : walk) r.boundary.push_back(detail::boundary_sample(m, x, opts.boundary_tol));
  // interface crossings on the boundary carry the set-valued part of the enclosure
  for (const auto& x : m.interface_points(omega, per_side * 4)) {
    const bool on_boundary = x[0] == omega[0].lo || x[0] == omega[0].hi || x[1] == omega[1].lo || x[1] == omega[1].hi;
    if (on_boundary) r.boundary.push_back(detail::boundary_sample(m, x, opts.boundary_tol));
  }

  const double perimeter = 2.0 * (omega[0].width() + omega[1].width());
  detail::Winder<M> w{m, opts.boundary_tol, perimeter * 1e-13, opts.max_samples};
  w.samples = walk.size();
  std::vector<Vec> gs;
  gs.reserve(walk.size());
  for (const auto& x : walk) gs.push_back(w.g(x));
  for (std::size_t i = 0; i < walk.size(); ++i) {
    const std::size_t j = (i + 1) % walk.size();
    w.walk(walk[i], gs[i], walk[j], gs[j]);
  }
  r.boundary_degree = static_cast<int>(std::lround(w.total / (2.0 * std::numbers::pi)));
  if (w.jumps) r.notes.push_back(std::to_string(w.jumps) + " boundary interface jump(s) certified by enclosure");
  r.notes.push_back("boundary samples used: " + std::to_string(w.samples));
  detail::attach_condition(m, omega, opts, r);
  return r;
}

template <PointMap M>
DegreeReport degree(const M& m, const Box& omega, const DegreeOptions& opts = {}) {
  if (omega.dim() == 1) return degree_1d(m, omega, opts);
  if (omega.dim() == 2) return degree_2d(m, omega, opts);
  throw Error(ErrorKind::invalid_argument, "degree supports dimensions 1 and 2");
}

/// Boundary degree only, no condition scan.
template <PointMap M>
int boundary_degree(const M& m, const Box& omega, DegreeOptions opts = {}) {
  opts.check_condition = false;
  return *degree(m, omega, opts).boundary_degree;
}

/// True when interval enclosures certify x - T x != 0 for every x in `b`,
/// bisecting the longest side up to `depth` times.
template <PointMap M>
bool certify_zero_free(const M& m, const Box& b, int depth = 10) {
  const Box img = m.enclose(b);
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const Interval diff = b[i] - img[i];
    if (diff.lo > 0.0 || diff.hi < 0.0) return true;
  }
  if (depth <= 0) return false;
  const std::size_t ax = b.longest_axis();
  const double mid = b[ax].mid();
  if (!(b[ax].width() > 0.0) || mid <= b[ax].lo || mid >= b[ax].hi) return false;
  return certify_zero_free(m, b.with_axis(ax, {b[ax].lo, mid}), depth - 1) &&
         certify_zero_free(m, b.with_axis(ax, {mid, b[ax].hi}), depth - 1);
}

// ---------------------------------------------------------------------------
// Property drivers.

enum class CheckStatus { pass, fail, inapplicable };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inapplicable: return "inapplicable";
  }
  return "?";
}

struct PropertyReport {
  std::string property;
  CheckStatus status = CheckStatus::inapplicable;
  std::vector<std::pair<std::string, int>> degrees;
  std::vector<std::string> notes;

  std::string to_text() const {
    std::string s = property + ": " + to_string(status) + "\n";
    for (const auto& [name, d] : degrees) s += "  deg(" + name + ") = " + std::to_string(d) + "\n";
    for (const auto& n : notes) s += "  note: " + n + "\n";
    return s;
  }
};

namespace detail {

inline PropertyReport inapplicable(std::string property, std::string why) {
  PropertyReport r;
  r.property = std::move(property);
  r.status = CheckStatus::inapplicable;
  r.notes.push_back(std::move(why));
  return r;
}

/// Degree of I - env on a box, or nullopt when its boundary meets a zero.
template <PointMap M>
std::optional<int> try_boundary_degree(const M& m, const Box& b, const DegreeOptions& opts, std::string& why) {
  try {
    return boundary_degree(m, b, opts);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::not_well_defined && e.kind() != ErrorKind::refinement_exhausted) throw;
    why = e.what();
    return std::nullopt;
  }
}

}  // namespace detail

/// deg(omega) = deg(omega1) + deg(omega2) for two boxes tiling omega along one
/// cut, after certifying x - T x != 0 on the boundary and the cut.
template <PointMap M>
PropertyReport verify_additivity(const M& m, const Box& omega, const Box& omega1, const Box& omega2,
                                 const DegreeOptions& opts = {}) {
  const std::string name = "additivity";
  // the two boxes must share exactly one face and cover omega
  std::optional<std::size_t> cut_axis;
  for (std::size_t i = 0; i < omega.dim(); ++i) {
    const bool same1 = omega1[i] == omega[i], same2 = omega2[i] == omega[i];
    if (same1 && same2) continue;
    const bool tiles = (omega1[i].lo == omega[i].lo && omega1[i].hi == omega2[i].lo && omega2[i].hi == omega[i].hi) ||
                       (omega2[i].lo == omega[i].lo && omega2[i].hi == omega1[i].lo && omega1[i].hi == omega[i].hi);
    if (!tiles || cut_axis) return detail::inapplicable(name, "sub-boxes must tile omega along a single cut");
    cut_axis = i;
  }
  if (!cut_axis) return detail::inapplicable(name, "sub-boxes must tile omega along a single cut");
  const double cut = (omega1[*cut_axis].hi == omega2[*cut_axis].lo) ? omega1[*cut_axis].hi : omega2[*cut_axis].hi;
  const Box face = omega.with_axis(*cut_axis, Interval{cut});
  if (omega.dim() == 1) {
    const ConvexBody enc = envelope_exact(m, Vec{cut}).value.affine(Vec{cut}, -1.0);
    if (enc.distance(Vec{0.0}) <= opts.boundary_tol)
      return detail::inapplicable(name, "x - env(x) contains 0 at the cut x=" + fmt_num(cut));
  } else if (!certify_zero_free(m, face, 14)) {
    return detail::inapplicable(name, "could not certify x - T x != 0 on the cut " + face.str());
  }

  std::string why;
  auto d = detail::try_boundary_degree(m, omega, opts, why);
  auto d1 = d ? detail::try_boundary_degree(m, omega1, opts, why) : std::nullopt;
  auto d2 = d1 ? detail::try_boundary_degree(m, omega2, opts, why) : std::nullopt;
  if (!d || !d1 || !d2) return detail::inapplicable(name, why);

  PropertyReport r;
  r.property = name;
  r.degrees = {{omega.str(), *d}, {omega1.str(), *d1}, {omega2.str(), *d2}};
  r.status = (*d == *d1 + *d2) ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

/// Axis-aligned decomposition of omega minus the interior block `a` into at
/// most 8 boxes (the 3x3 grid without its centre, empty cells dropped).
inline std::vector<Box> box_complement(const Box& omega, const Box& a) {
  std::vector<Box> out;
  if (omega.dim() == 1) {
    if (a[0].lo > omega[0].lo) out.push_back(Box{{omega[0].lo, a[0].lo}});
    if (a[0].hi < omega[0].hi) out.push_back(Box{{a[0].hi, omega[0].hi}});
    return out;
  }
  const Interval xs[3] = {{omega[0].lo, a[0].lo}, a[0], {a[0].hi, omega[0].hi}};
  const Interval ys[3] = {{omega[1].lo, a[1].lo}, a[1], {a[1].hi, omega[1].hi}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == 1 && j == 1) continue;
      if (!(xs[i].width() > 0.0) || !(ys[j].width() > 0.0)) continue;
      out.push_back(Box{xs[i], ys[j]});
    }
  return out;
}

/// deg(omega) = deg(omega \ A) for a closed box A inside omega on which
/// x - T x != 0 is certified; omega \ A is summed over box_complement().
template <PointMap M>
PropertyReport verify_excision(const M& m, const Box& omega, const std::optional<Box>& a,
                               const DegreeOptions& opts = {}) {
  const std::string name = "excision";
  std::string why;
  auto d = detail::try_boundary_degree(m, omega, opts, why);
  if (!d) return detail::inapplicable(name, why);
  PropertyReport r;
  r.property = name;
  if (!a) {
    r.degrees = {{omega.str(), *d}, {"omega \\ {}", *d}};
    r.status = CheckStatus::pass;
    r.notes.push_back("empty excised set");
    return r;
  }
  for (std::size_t i = 0; i < omega.dim(); ++i)
    if (!((*a)[i].lo > omega[i].lo && (*a)[i].hi < omega[i].hi))
      return detail::inapplicable(name, "excised box must lie in the interior of omega");
  if (!certify_zero_free(m, *a, omega.dim() == 1 ? 16 : 12))
    return detail::inapplicable(name, "could not certify x - T x != 0 on " + a->str());

  int sum = 0;
  for (const auto& piece : box_complement(omega, *a)) {
    auto dp = detail::try_boundary_degree(m, piece, opts, why);
    if (!dp) return detail::inapplicable(name, "complement piece " + piece.str() + ": " + why);
    r.degrees.push_back({piece.str(), *dp});
    sum += *dp;
  }
  r.degrees.insert(r.degrees.begin(), {omega.str(), *d});
  r.status = (sum == *d) ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

/// Odd envelope on the boundary of a symmetric box forces an odd degree.
template <PointMap M>
PropertyReport verify_borsuk(const M& m, const Box& omega, const DegreeOptions& opts = {}) {
  const std::string name = "borsuk";
  for (std::size_t i = 0; i < omega.dim(); ++i)
    if (omega[i].lo != -omega[i].hi || !(omega[i].hi > 0.0))
      return detail::inapplicable(name, "omega must be symmetric about 0 and contain 0");
  const std::vector<Vec> pts = box_boundary_walk(omega, 64);
  for (const auto& x : pts) {
    const ConvexBody e = envelope_exact(m, x).value;
    const ConvexBody f = envelope_exact(m, -x).value.affine(Vec(x.size(), 0.0), -1.0);
    if (hausdorff_distance(e, f) > opts.membership_tol)
      return detail::inapplicable(name, "envelope not odd at boundary point (" + fmt_vec(x) + ")");
  }
  std::string why;
  auto d = detail::try_boundary_degree(m, omega, opts, why);
  if (!d) return detail::inapplicable(name, why);
  PropertyReport r;
  r.property = name;
  r.degrees = {{omega.str(), *d}};
  r.status = (*d % 2 != 0) ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

/// Two maps with equal envelopes on the boundary have equal degrees.
template <PointMap M1, PointMap M2>
PropertyReport verify_boundary_dependence(const M1& t, const M2& s, const Box& omega, const DegreeOptions& opts = {}) {
  const std::string name = "boundary dependence";
  for (const auto& x : box_boundary_walk(omega, 64))
    if (hausdorff_distance(envelope_exact(t, x).value, envelope_exact(s, x).value) > opts.membership_tol)
      return detail::inapplicable(name, "envelopes differ at boundary point (" + fmt_vec(x) + ")");
  std::string why;
  auto dt = detail::try_boundary_degree(t, omega, opts, why);
  auto ds = dt ? detail::try_boundary_degree(s, omega, opts, why) : std::nullopt;
  if (!dt || !ds) return detail::inapplicable(name, why);
  PropertyReport r;
  r.property = name;
  r.degrees = {{"T", *dt}, {"S", *ds}};
  r.status = (*dt == *ds) ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

// ---------------------------------------------------------------------------
// Homotopy between the endpoint maps of a family H(x, t).

/// H as a piecewise map over (x, t); the last input coordinate is t in [0, 1].
class HomotopyFamily {
 public:
  explicit HomotopyFamily(PiecewiseMap h) : h_(std::move(h)) {
    const std::size_t n = h_.input_dim();
    if (n < 2 || h_.output_dim() != n - 1)
      throw Error(ErrorKind::dimension_mismatch, "homotopy map must take (x, t) to a vector of x's dimension");
    const Interval tr = h_.domain()[n - 1];
    if (tr.lo > 0.0 || tr.hi < 1.0) throw Error(ErrorKind::domain, "homotopy parameter domain must contain [0,1]");
  }

  const PiecewiseMap& map() const noexcept { return h_; }
  std::size_t x_dim() const noexcept { return h_.input_dim() - 1; }
  PiecewiseMap slice(double t) const { return h_.bind(h_.input_dim() - 1, t); }

  /// max over x-grid points and consecutive t-grid values of |H(x,t_i) - H(x,t_{i+1})|.
  double t_modulus(std::size_t t_steps, std::size_t x_grid) const {
    const PiecewiseMap x_only = slice(0.0);
    double worst = 0.0;
    for (const auto& x : grid_points(x_only.domain(), x_grid)) {
      Vec prev;
      for (std::size_t i = 0; i <= t_steps; ++i) {
        Vec z(x.size() + 1);
        for (std::size_t k = 0; k < x.size(); ++k) z[k] = x[k];
        z[x.size()] = static_cast<double>(i) / static_cast<double>(t_steps);
        const Vec v = h_.evaluate(z);
        if (i) worst = std::max(worst, norm(v - prev));
        prev = v;
      }
    }
    return worst;
  }

 private:
  PiecewiseMap h_;
};

struct HomotopyReport {
  CheckStatus status = CheckStatus::inapplicable;
  std::optional<int> degree_t0, degree_t1;
  std::size_t certified_points = 0;
  std::size_t t_steps = 0;
  double modulus_coarse = 0.0, modulus_fine = 0.0;
  std::optional<ConditionReport> condition_t0, condition_t1;
  std::vector<double> unstable_t;  ///< interior t where the condition fails
  std::vector<std::string> notes;

  std::string to_text() const {
    std::string s = "homotopy bridge: " + std::string(to_string(status)) + "\n";
    s += "  deg at t=0: " + (degree_t0 ? std::to_string(*degree_t0) : std::string("-")) + "\n";
    s += "  deg at t=1: " + (degree_t1 ? std::to_string(*degree_t1) : std::string("-")) + "\n";
    s += "  certified (boundary x t) points: " + std::to_string(certified_points) + " over " +
         std::to_string(t_steps + 1) + " t values\n";
    s += "  t-modulus (grid, half grid): " + fmt_num(modulus_coarse) + ", " + fmt_num(modulus_fine) + "\n";
    if (!unstable_t.empty()) {
      s += "  condition fails at interior t:";
      for (double t : unstable_t) s += " " + fmt_num(t);
      s += "\n";
    }
    for (const auto& n : notes) s += "  note: " + n + "\n";
    return s;
  }
};

/// Certifies x ∉ env(H_t)(x) on a (boundary x t)-grid and the compatibility
/// condition at t = 0 and t = 1, then compares the endpoint degrees. The
/// condition is also scanned at interior t, for diagnosis only.
inline HomotopyReport homotopy_degree_bridge(const HomotopyFamily& h, const Box& omega, std::size_t t_steps = 64,
                                             const DegreeOptions& opts = {}) {
  HomotopyReport r;
  r.t_steps = t_steps;
  const std::vector<Vec> bpts = box_boundary_walk(omega, 64);
  for (std::size_t i = 0; i <= t_steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(t_steps);
    const PiecewiseMap ht = h.slice(t);
    std::vector<Vec> pts = bpts;
    for (const auto& x : ht.interface_points(omega, 64))
      if (omega.dim() == 1 ? (x[0] == omega[0].lo || x[0] == omega[0].hi)
                           : (x[0] == omega[0].lo || x[0] == omega[0].hi || x[1] == omega[1].lo || x[1] == omega[1].hi))
        pts.push_back(x);
    for (const auto& x : pts) {
      const ConvexBody enc = envelope_exact(ht, x).value.affine(x, -1.0);
      if (enc.distance(Vec(x.size(), 0.0)) <= opts.boundary_tol) {
        r.notes.push_back("x in env(H_t)(x) at x=(" + fmt_vec(x) + "), t=" + fmt_num(t));
        r.status = CheckStatus::inapplicable;
        return r;
      }
      ++r.certified_points;
    }
  }
  r.modulus_coarse = h.t_modulus(t_steps, 32);
  r.modulus_fine = h.t_modulus(2 * t_steps, 32);

  const std::size_t grid = condition_grid_for(opts, omega.dim());
  const PiecewiseMap h0 = h.slice(0.0), h1 = h.slice(1.0);
  r.condition_t0 = check_condition(h0, omega, grid, opts.membership_tol);
  r.condition_t1 = check_condition(h1, omega, grid, opts.membership_tol);
  for (std::size_t i = 1; i < t_steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(t_steps);
    if (!check_condition(h.slice(t), omega, omega.dim() == 1 ? grid : grid / 4, opts.membership_tol).holds())
      r.unstable_t.push_back(t);
  }
  if (!r.unstable_t.empty())
    r.notes.push_back("compatibility condition fails for " + std::to_string(r.unstable_t.size()) +
                      " interior t value(s); only the endpoints are required");

  r.degree_t0 = boundary_degree(h0, omega, opts);
  r.degree_t1 = boundary_degree(h1, omega, opts);
  if (!r.condition_t0->holds() || !r.condition_t1->holds()) {
    r.status = CheckStatus::inapplicable;
    r.notes.push_back("compatibility condition fails at an endpoint t");
    return r;
  }
  r.status = (*r.degree_t0 == *r.degree_t1) ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

}  // namespace ccdeg

#endif  // CCDEG_DEGREE_HPP
