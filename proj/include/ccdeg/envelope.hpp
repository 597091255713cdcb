#ifndef CCDEG_ENVELOPE_HPP
#define CCDEG_ENVELOPE_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ccdeg/geometry.hpp"
#include "ccdeg/maps.hpp"
#include "ccdeg/parallel.hpp"

namespace ccdeg {

// Closed-convex envelope: env(x) = intersection over eps > 0 of the closed
// convex hull of T(B_eps(x) ∩ domain).

enum class EnvelopeMode { exact, sampled };

struct EpsilonStep {
  double epsilon;
  ConvexBody hull;
  double gap;  ///< Hausdorff distance to the previous hull; +inf for the first
};

struct EnvelopeResult {
  ConvexBody value;
  EnvelopeMode mode = EnvelopeMode::exact;
  std::vector<EpsilonStep> epsilon_trace;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& detail, std::vector<EpsilonStep> trace)
      : Error(ErrorKind::no_convergence, detail), trace_(std::move(trace)) {}
  const std::vector<EpsilonStep>& trace() const noexcept { return trace_; }

 private:
  std::vector<EpsilonStep> trace_;
};

/// Envelope as the hull of one-sided limit values. Exact under the
/// closure-continuity contract of the map's pieces.
template <PointMap M>
EnvelopeResult envelope_exact(const M& m, const Vec& x, double tol = kPredicateTol) {
  const MapValueSet s = m.adjacent_values(x, tol);
  return {convex_hull(s.values, tol), EnvelopeMode::exact, {}};
}

/// eps_k = eps_0 2^-k with eps_0 = (shortest domain side) / 8, continued until
/// eps falls below tol / 1024.
inline std::vector<double> default_schedule(const Box& domain, double tol) {
  double eps = domain.min_side() / 8.0;
  if (!(eps > 0.0)) eps = 0.125;
  std::vector<double> s;
  while (s.size() < 80) {
    s.push_back(eps);
    if (eps < tol / 1024.0) break;
    eps *= 0.5;
  }
  return s;
}

/// Deterministic quasi-uniform samples of the closed eps-ball around x,
/// projected into `domain` (projection onto a box never leaves the ball).
/// 1-d: 64 uniform points including both ends, plus x. 2-d: x plus 8
/// concentric rings of 32 points.
inline std::vector<Vec> ball_samples(const Box& domain, const Vec& x, double eps) {
  std::vector<Vec> out;
  out.push_back(domain.clamp(x));
  if (x.size() == 1) {
    constexpr int n = 64;
    for (int i = 0; i < n; ++i) {
      double s = -1.0 + 2.0 * i / (n - 1);
      out.push_back(domain.clamp(Vec{x[0] + s * eps}));
    }
    return out;
  }
  constexpr int rings = 8, per_ring = 32;
  for (int r = 1; r <= rings; ++r) {
    const double rad = eps * r / rings;
    const double phase = (r % 2) ? 0.0 : std::numbers::pi / per_ring;
    for (int k = 0; k < per_ring; ++k) {
      const double a = phase + 2.0 * std::numbers::pi * k / per_ring;
      out.push_back(domain.clamp(Vec{x[0] + rad * std::cos(a), x[1] + rad * std::sin(a)}));
    }
  }
  return out;
}

/// Envelope by shrinking-ball sampling. Stops at the first step whose hull is
/// within tol of the previous one once eps itself is at most tol, and returns
/// that hull.
template <PointMap M>
EnvelopeResult envelope_sampled(const M& m, const Vec& x, double tol, const std::vector<double>& schedule) {
  if (schedule.empty()) throw Error(ErrorKind::invalid_argument, "empty schedule");
  for (std::size_t k = 1; k < schedule.size(); ++k)
    if (!(schedule[k] < schedule[k - 1])) throw Error(ErrorKind::invalid_argument, "schedule must be strictly decreasing");
  if (!(schedule.back() < tol)) throw Error(ErrorKind::invalid_argument, "schedule must reach below tol");
  if (!m.domain().contains(x, kPredicateTol))
    throw Error(ErrorKind::domain, "(" + fmt_vec(x) + ") outside " + m.domain().str());

  EnvelopeResult r;
  r.mode = EnvelopeMode::sampled;
  for (double eps : schedule) {
    std::vector<Vec> values;
    for (const auto& p : ball_samples(m.domain(), x, eps)) values.push_back(m.evaluate(p));
    ConvexBody h = convex_hull(values, kPredicateTol);
    const double gap = r.epsilon_trace.empty() ? std::numeric_limits<double>::infinity()
                                               : hausdorff_distance(r.epsilon_trace.back().hull, h);
    r.epsilon_trace.push_back({eps, h, gap});
    if (gap < tol && eps <= tol) {
      r.value = h;
      return r;
    }
  }
  throw NoConvergence("hull did not stabilise within the schedule at (" + fmt_vec(x) + ")", r.epsilon_trace);
}

template <PointMap M>
EnvelopeResult envelope_sampled(const M& m, const Vec& x, double tol) {
  return envelope_sampled(m, x, tol, default_schedule(m.domain(), tol));
}

// ---------------------------------------------------------------------------
// Compatibility condition: {x} ∩ env(x) ⊂ {T x}.

struct ConditionPoint {
  Vec x;
  Vec tx;
  ConvexBody envelope;
  bool violation = false;
};

struct Violation {
  Vec x;
  ConvexBody envelope;
  Vec tx;
  /// x lies in the hull of every value seen in the scan, an over-approximation
  /// of the envelope's range.
  bool in_range = false;
};

enum class Verdict { holds, fails };

struct ConditionReport {
  std::vector<ConditionPoint> scanned;
  std::vector<Violation> violations;
  Verdict verdict = Verdict::holds;
  double tol = kMembershipTol;

  bool holds() const { return verdict == Verdict::holds; }

  /// Columns: x, Tx, envelope, violation. Vector coordinates are space-separated.
  std::string to_csv() const {
    std::string s = "x,Tx,envelope,violation\n";
    for (const auto& p : scanned)
      s += fmt_vec(p.x) + "," + fmt_vec(p.tx) + "," + p.envelope.str() + "," + (p.violation ? "1" : "0") + "\n";
    return s;
  }
};

/// Condition scan over an explicit point list (sorted and deduplicated here).
template <PointMap M>
ConditionReport check_condition_at(const M& m, std::vector<Vec> points, double tol = kMembershipTol) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  ConditionReport rep;
  rep.tol = tol;
  struct Row {
    ConditionPoint p;
    std::vector<Vec> values;
  };
  auto rows = parallel_map<Row>(points.size(), [&](std::size_t i) {
    const Vec& x = points[i];
    const MapValueSet vs = m.adjacent_values(x, kPredicateTol);
    Row r;
    r.p.x = x;
    r.p.tx = m.evaluate(x);
    r.p.envelope = convex_hull(vs.values, kPredicateTol);
    r.p.violation = m.output_dim() == x.size() && contains(r.p.envelope, x, tol) && norm(x - r.p.tx) > tol;
    r.values = vs.values;
    return r;
  });

  std::vector<Vec> all_values;
  for (auto& r : rows)
    for (auto& v : r.values) all_values.push_back(v);
  const bool have_range = !all_values.empty() && m.output_dim() <= 2;
  const ConvexBody range = have_range ? convex_hull(all_values, kPredicateTol) : ConvexBody{};

  for (auto& r : rows) {
    if (r.p.violation) rep.violations.push_back({r.p.x, r.p.envelope, r.p.tx, have_range && contains(range, r.p.x, tol)});
    rep.scanned.push_back(std::move(r.p));
  }
  rep.verdict = rep.violations.empty() ? Verdict::holds : Verdict::fails;
  return rep;
}

/// Condition scan over `scan`: an n-step grid plus every interface point
/// inside `scan`, where violations can actually occur.
template <PointMap M>
ConditionReport check_condition(const M& m, const Box& scan, std::size_t grid, double tol = kMembershipTol) {
  if (!m.domain().contains(scan, kPredicateTol))
    throw Error(ErrorKind::domain, "scan box " + scan.str() + " outside " + m.domain().str());
  std::vector<Vec> pts = grid_points(scan, grid);
  for (auto& p : m.interface_points(scan, grid))
    if (scan.contains(p)) pts.push_back(p);
  return check_condition_at(m, std::move(pts), tol);
}

// ---------------------------------------------------------------------------
// Minimality against a supplied closed-convex-valued usc majorant.

/// Interval-valued majorant on a 1-d domain: a piecewise map with two outputs
/// (lower, upper); its value at x is the hull of [lower, upper] over every
/// piece whose region closure contains x.
class IntervalMajorant {
 public:
  explicit IntervalMajorant(PiecewiseMap bounds) : bounds_(std::move(bounds)) {
    if (bounds_.input_dim() != 1 || bounds_.output_dim() != 2)
      throw Error(ErrorKind::invalid_argument, "interval majorant needs one input and outputs (lower, upper)");
  }

  ConvexBody operator()(const Vec& x) const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& v : bounds_.adjacent_values(x, kPredicateTol).values) {
      lo = std::min(lo, std::min(v[0], v[1]));
      hi = std::max(hi, std::max(v[0], v[1]));
    }
    return ConvexBody::interval(lo, hi);
  }

 private:
  PiecewiseMap bounds_;
};

struct MinimalityReport {
  std::size_t checked = 0;
  std::vector<Vec> selection_failures;  ///< T x outside the majorant: not a valid majorant
  std::vector<Vec> violations;          ///< envelope not inside the majorant
  bool holds() const { return selection_failures.empty() && violations.empty(); }
};

template <PointMap M, class Majorant>
MinimalityReport check_minimality(const M& m, const Majorant& majorant, const std::vector<Vec>& points,
                                  double tol = kMembershipTol) {
  MinimalityReport r;
  for (const auto& x : points) {
    const ConvexBody big = majorant(x);
    ++r.checked;
    if (!contains(big, m.evaluate(x), tol)) r.selection_failures.push_back(x);
    if (!contains(big, envelope_exact(m, x).value, tol)) r.violations.push_back(x);
  }
  return r;
}

}  // namespace ccdeg

#endif  // CCDEG_ENVELOPE_HPP
