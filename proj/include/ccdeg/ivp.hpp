#ifndef CCDEG_IVP_HPP
#define CCDEG_IVP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ccdeg/maps.hpp"
#include "ccdeg/parallel.hpp"

namespace ccdeg {

// Scalar problems x' = f(t, x), x(a) = x_a, with f piecewise in (t, x) and
// its x-discontinuities confined to declared curves x = gamma(t).

enum class CurveKind { unclassified, viable, inviable, not_admissible };
/// Side a trajectory leaves an inviable curve on: upward when
/// gamma' + psi < f in the tube, downward when gamma' - psi > f.
enum class Crossing { none, upward, downward };

inline const char* to_string(CurveKind k) {
  switch (k) {
    case CurveKind::unclassified: return "unclassified";
    case CurveKind::viable: return "viable";
    case CurveKind::inviable: return "inviable";
    case CurveKind::not_admissible: return "not_admissible";
  }
  return "?";
}
inline const char* to_string(Crossing c) {
  switch (c) {
    case Crossing::none: return "none";
    case Crossing::upward: return "upward";
    case Crossing::downward: return "downward";
  }
  return "?";
}

struct CurveClass {
  CurveKind kind = CurveKind::unclassified;
  Crossing direction = Crossing::none;
  double eps = 0.0;  ///< tube half-width (inviable only)
  double psi = 0.0;  ///< transversality margin (inviable only)
  std::size_t t_grid = 0, y_grid = 0;
  double viable_defect = 0.0;      ///< max |gamma' - f(t, gamma)| over the grid
  std::optional<Vec> witness;      ///< (t, y) where the last failing test broke
};

struct DiscontinuityCurve {
  std::string name;
  Expr gamma;   ///< of t (variable 0)
  Expr dgamma;  ///< derivative of gamma
  double c = 0.0, d = 0.0;
  double eps = 0.5;            ///< tube half-width used by classification
  std::optional<double> psi;   ///< fixed margin; searched when absent
  CurveClass cls;

  double at(double t) const { return gamma.eval(Vec{t}); }
  double slope(double t) const { return dgamma.eval(Vec{t}); }
  bool active(double t) const { return t >= c && t <= d; }
};

struct IVProblem {
  double a = 0.0, b = 1.0;
  double x_a = 0.0;
  PiecewiseMap f;  ///< inputs (t, x), one output
  Expr M;          ///< bound of |f| as a function of t
  std::vector<DiscontinuityCurve> curves;

  void validate() const {
    if (!(a < b)) throw Error(ErrorKind::invalid_argument, "time interval needs a < b");
    if (f.input_dim() != 2 || f.output_dim() != 1)
      throw Error(ErrorKind::dimension_mismatch, "f must map (t, x) to a scalar");
    if (f.domain()[0].lo > a || f.domain()[0].hi < b)
      throw Error(ErrorKind::domain, "f's t-range does not cover [a, b]");
    if (!f.domain()[1].contains(x_a)) throw Error(ErrorKind::domain, "x_a outside f's x-range");
    for (const auto& k : curves)
      if (!(k.c <= k.d) || k.c < a || k.d > b)
        throw Error(ErrorKind::invalid_argument, "curve " + k.name + " must live on a subinterval of [a, b]");
  }
  double fval(double t, double x) const { return f.evaluate(Vec{t, x})[0]; }
  double bound(double t) const { return M.eval(Vec{t}); }
};

// ---------------------------------------------------------------------------
// Quadrature.

namespace detail {

template <class F>
double simpson_rec(F& g, double l, double r, double fl, double fm, double fr, double whole, double tol, double min_w,
                   int depth, bool& failed) {
  const double m = 0.5 * (l + r);
  const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
  const double flm = g(lm), frm = g(rm);
  const double left = (m - l) / 6.0 * (fl + 4.0 * flm + fm);
  const double right = (r - m) / 6.0 * (fm + 4.0 * frm + fr);
  const double diff = left + right - whole;
  // a jump confined to a sliver below min_w contributes at most its height times the width
  if (std::abs(diff) <= 15.0 * tol || r - l <= min_w) return left + right + diff / 15.0;
  if (depth <= 0) {
    failed = true;
    return left + right;
  }
  return simpson_rec(g, l, m, fl, flm, fm, left, 0.5 * tol, min_w, depth - 1, failed) +
         simpson_rec(g, m, r, fm, frm, fr, right, 0.5 * tol, min_w, depth - 1, failed);
}

}  // namespace detail

/// Adaptive Simpson on [l, r]. Endpoints are pulled inward by (r - l) * 1e-10
/// so that a value defined only on a measure-zero set at an endpoint (an
/// event knot on a curve) is never sampled.
template <class F>
double integrate(F&& g, double l, double r, double tol = 1e-13) {
  if (r <= l) return 0.0;
  const double nudge = (r - l) * 1e-10;
  const double lo = l + nudge, hi = r - nudge;
  const double fl = g(lo), fr = g(hi), fm = g(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (fl + 4.0 * fm + fr);
  bool failed = false;
  const double min_w = std::max((r - l) * 1e-12, 1e-15);
  const double v = detail::simpson_rec(g, lo, hi, fl, fm, fr, whole, tol, min_w, 60, failed);
  if (failed || !std::isfinite(v))
    throw Error(ErrorKind::quadrature, "adaptive Simpson did not converge on [" + fmt_num(l) + "," + fmt_num(r) + "]");
  // the two nudged slivers, at the endpoint values
  return v + nudge * (fl + fr);
}

/// |x_a| + integral of M over [a, b].
inline double apriori_bound(const IVProblem& p) {
  constexpr int panels = 64;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double l = p.a + (p.b - p.a) * i / panels, r = (i + 1 == panels) ? p.b : p.a + (p.b - p.a) * (i + 1) / panels;
    s += integrate([&](double t) { return p.bound(t); }, l, r);
  }
  return std::abs(p.x_a) + s;
}

// ---------------------------------------------------------------------------
// Structural checks.

struct GridWitness {
  Vec point;  ///< (t, x)
  std::string detail;
};

/// First (t, x) grid point with |f| > M(t) + tol.
inline std::optional<GridWitness> check_growth_bound(const IVProblem& p, std::size_t per_axis = 200, double tol = 1e-12) {
  const Box grid_box{{p.a, p.b}, p.f.domain()[1]};
  for (const auto& z : grid_points(grid_box, per_axis)) {
    const double v = p.f.evaluate(z)[0], m = p.bound(z[0]);
    if (std::abs(v) > m + tol)
      return GridWitness{z, "|f| = " + fmt_num(std::abs(v)) + " exceeds M = " + fmt_num(m)};
  }
  return std::nullopt;
}

/// First x-discontinuity of f on a t-grid that no declared curve covers.
inline std::optional<GridWitness> check_curve_coverage(const IVProblem& p, std::size_t t_lines = 200,
                                                       double tol = 1e-9) {
  const Interval xr = p.f.domain()[1];
  std::vector<double> roots;
  for (std::size_t i = 0; i <= t_lines; ++i) {
    const double t = (i == t_lines) ? p.b : p.a + (p.b - p.a) * static_cast<double>(i) / static_cast<double>(t_lines);
    roots.clear();
    for (const auto& piece : p.f.pieces())
      for (const auto& c : piece.region.constraints())
        detail::line_roots([&](double x) { return c.g.eval(Vec{t, x}); }, xr.lo, xr.hi, 256, roots);
    for (double x : roots) {
      const MapValueSet vs = p.f.adjacent_values(Vec{t, x}, kPredicateTol);
      double spread = 0.0;
      for (const auto& v : vs.values) spread = std::max(spread, std::abs(v[0] - vs.values[0][0]));
      if (spread <= tol) continue;
      const bool covered = std::any_of(p.curves.begin(), p.curves.end(), [&](const DiscontinuityCurve& k) {
        return k.active(t) && std::abs(k.at(t) - x) <= 1e-6 * std::max(1.0, std::abs(x));
      });
      if (!covered) return GridWitness{Vec{t, x}, "x-discontinuity of f not on a declared curve"};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Curve classification.

struct ClassifyOptions {
  std::size_t t_grid = 1000;
  std::size_t y_grid = 100;
  double viable_tol = 1e-9;
};

namespace detail {

inline std::vector<double> curve_t_grid(const DiscontinuityCurve& k, std::size_t n) {
  std::vector<double> ts;
  for (std::size_t i = 0; i <= n; ++i)
    ts.push_back(i == n ? k.d : k.c + (k.d - k.c) * static_cast<double>(i) / static_cast<double>(n));
  return ts;
}

/// f values in the eps-tube over t: a uniform y-grid plus every one-sided value at gamma(t).
inline std::vector<double> tube_values(const IVProblem& p, const DiscontinuityCurve& k, double t, double eps,
                                       std::size_t ny) {
  const Interval xr = p.f.domain()[1];
  const double g = k.at(t);
  const double lo = std::max(xr.lo, g - eps), hi = std::min(xr.hi, g + eps);
  std::vector<double> vals;
  for (std::size_t j = 0; j <= ny; ++j) {
    const double y = (j == ny) ? hi : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(ny);
    vals.push_back(p.fval(t, y));
  }
  if (xr.contains(g))
    for (const auto& v : p.f.adjacent_values(Vec{t, g}, kPredicateTol).values) vals.push_back(v[0]);
  return vals;
}

}  // namespace detail

/// Viable when gamma' = f(t, gamma) on the grid; inviable when
/// gamma' + psi < f (upward) or gamma' - psi > f (downward) at every sampled
/// tube point; otherwise not admissible. psi is searched over 2^-k,
/// k = 0..20, when the curve does not fix it.
inline CurveClass classify_curve(const IVProblem& p, const DiscontinuityCurve& k, const ClassifyOptions& o = {}) {
  CurveClass r;
  r.t_grid = std::max<std::size_t>(o.t_grid, 1000);
  r.y_grid = std::max<std::size_t>(o.y_grid, 100);
  const std::vector<double> ts = detail::curve_t_grid(k, r.t_grid);

  for (double t : ts) {
    const double dev = std::abs(k.slope(t) - p.fval(t, k.at(t)));
    if (dev > r.viable_defect) {
      r.viable_defect = dev;
      if (dev > o.viable_tol) r.witness = Vec{t, k.at(t)};
    }
  }
  if (r.viable_defect <= o.viable_tol) {
    r.kind = CurveKind::viable;
    r.witness.reset();
    return r;
  }

  // worst margins over the tube: min (f - gamma') and min (gamma' - f)
  struct Margin {
    double up, down, t_up, t_down;
  };
  const auto margins = parallel_map<Margin>(ts.size(), [&](std::size_t i) {
    const double t = ts[i], s = k.slope(t);
    Margin m{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), t, t};
    for (double v : detail::tube_values(p, k, t, k.eps, r.y_grid)) {
      m.up = std::min(m.up, v - s);
      m.down = std::min(m.down, s - v);
    }
    return m;
  });
  double up = std::numeric_limits<double>::infinity(), down = up, t_up = k.c, t_down = k.c;
  for (const auto& m : margins) {
    if (m.up < up) up = m.up, t_up = m.t_up;
    if (m.down < down) down = m.down, t_down = m.t_down;
  }

  auto pick_psi = [&](double margin) -> std::optional<double> {
    if (k.psi) return (*k.psi > 0.0 && *k.psi < margin) ? k.psi : std::nullopt;
    for (int e = 0; e <= 20; ++e) {
      const double psi = std::ldexp(1.0, -e);
      if (psi < margin) return psi;
    }
    return std::nullopt;
  };
  if (auto psi = pick_psi(up)) {
    r.kind = CurveKind::inviable;
    r.direction = Crossing::upward;
    r.eps = k.eps;
    r.psi = *psi;
    r.witness.reset();
    return r;
  }
  if (auto psi = pick_psi(down)) {
    r.kind = CurveKind::inviable;
    r.direction = Crossing::downward;
    r.eps = k.eps;
    r.psi = *psi;
    r.witness.reset();
    return r;
  }
  r.kind = CurveKind::not_admissible;
  r.witness = Vec{up <= down ? t_up : t_down, k.at(up <= down ? t_up : t_down)};
  return r;
}

inline void classify_curves(IVProblem& p, const ClassifyOptions& o = {}) {
  for (auto& k : p.curves) k.cls = classify_curve(p, k, o);
}

// ---------------------------------------------------------------------------
// Trajectories.

struct CrossingEvent {
  double t;
  std::size_t curve;
};
struct SlidingInterval {
  double t0, t1;
  std::size_t curve;
};

/// Knot values with linear interpolation, replaced by the curve itself on
/// sliding intervals.
struct Trajectory {
  std::vector<double> t, x;
  std::vector<CrossingEvent> crossings;
  std::vector<SlidingInterval> sliding;
  std::vector<Expr> sliding_curves;  ///< gamma for each sliding interval

  double at(double s) const {
    for (std::size_t i = 0; i < sliding.size(); ++i)
      if (s >= sliding[i].t0 && s <= sliding[i].t1) return sliding_curves[i].eval(Vec{s});
    if (s <= t.front()) return x.front();
    if (s >= t.back()) return x.back();
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t j = static_cast<std::size_t>(it - t.begin());
    const double w = (s - t[j - 1]) / (t[j] - t[j - 1]);
    return x[j - 1] + w * (x[j] - x[j - 1]);
  }

  double sup_norm() const {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }

  /// Columns: t, x, crossing (curve index or -1), sliding (curve index or -1).
  std::string to_csv() const {
    std::string s = "t,x,crossing,sliding\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
      long cross = -1, slide = -1;
      for (const auto& e : crossings)
        if (e.t == t[i]) cross = static_cast<long>(e.curve);
      for (const auto& si : sliding)
        if (t[i] >= si.t0 && t[i] <= si.t1) slide = static_cast<long>(si.curve);
      s += fmt_num(t[i]) + "," + fmt_num(x[i]) + "," + std::to_string(cross) + "," + std::to_string(slide) + "\n";
    }
    return s;
  }
};

struct SolveOptions {
  double event_tol = 1e-12;  ///< bracketing width in t
  double contact_tol = 1e-12;
};

namespace detail {

class Integrator {
 public:
  Integrator(const IVProblem& p, double h_max, const SolveOptions& o) : p_(p), h_max_(h_max), o_(o) {}

  Trajectory run() {
    tr_.t.push_back(p_.a);
    tr_.x.push_back(p_.x_a);
    double t = p_.a, x = p_.x_a;
    while (t < p_.b) {
      if (auto k = contact(t, x)) {
        const auto& cls = p_.curves[*k].cls;
        if (cls.kind == CurveKind::viable && t < p_.curves[*k].d) {
          slide(*k, t, x);
          continue;
        }
        if (cls.kind == CurveKind::not_admissible)
          throw Error(ErrorKind::curve_contact_unclassified, "state reached curve " + p_.curves[*k].name +
                                                                 " (neither viable nor inviable) at t=" + fmt_num(t));
      }
      free_step(t, x);
    }
    return std::move(tr_);
  }

 private:
  double s_of(std::size_t k, double t, double x) const { return x - p_.curves[k].at(t); }

  // curve (active at t) the state sits on
  std::optional<std::size_t> contact(double t, double x) const {
    for (std::size_t k = 0; k < p_.curves.size(); ++k) {
      const auto& c = p_.curves[k];
      if (!c.active(t)) continue;
      if (std::abs(s_of(k, t, x)) <= o_.contact_tol * std::max(1.0, std::abs(x))) return k;
    }
    return std::nullopt;
  }

  // piece used for a step from (t, x); on an inviable curve, the piece on the departure side
  std::size_t lock_piece(double t, double x) const {
    if (auto k = contact(t, x)) {
      const auto& c = p_.curves[*k];
      if (c.cls.kind == CurveKind::inviable) {
        const double eta = std::min(1e-9, 0.5 * c.cls.eps);
        const double side = c.cls.direction == Crossing::upward ? 1.0 : -1.0;
        if (auto o = p_.f.owner(Vec{t, c.at(t) + side * eta})) return *o;
      }
    }
    p_.fval(t, x);  // domain and cover checks
    return *p_.f.owner(Vec{t, x});
  }

  double fk(std::size_t piece, double t, double x) const { return p_.f.piece_value(piece, Vec{t, x})[0]; }

  double rk4(std::size_t piece, double t, double x, double h) const {
    const double k1 = fk(piece, t, x);
    const double k2 = fk(piece, t + 0.5 * h, x + 0.5 * h * k1);
    const double k3 = fk(piece, t + 0.5 * h, x + 0.5 * h * k2);
    const double k4 = fk(piece, t + h, x + h * k3);
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  double next_break(double t) const {
    double nb = p_.b;
    for (const auto& c : p_.curves) {
      if (c.c > t) nb = std::min(nb, c.c);
      if (c.d > t) nb = std::min(nb, c.d);
    }
    return nb;
  }

  // sign of x - gamma just after (t, x), with the departure side for a state on the curve
  double side_sign(std::size_t k, double t, double x) const {
    const double s = s_of(k, t, x);
    const double tol = o_.contact_tol * std::max(1.0, std::abs(x));
    if (std::abs(s) <= tol) {
      const auto& c = p_.curves[k];
      if (c.cls.kind == CurveKind::inviable) return c.cls.direction == Crossing::upward ? 1.0 : -1.0;
      return 0.0;
    }
    return s > 0.0 ? 1.0 : -1.0;
  }

  bool crossed(std::size_t k, double sign0, double t1, double x1) const {
    const double s1 = s_of(k, t1, x1);
    if (sign0 == 0.0) return false;
    return s1 == 0.0 || (s1 > 0.0) != (sign0 > 0.0);
  }

  void push_knot(double t, double x) {
    if (t == tr_.t.back()) {
      tr_.x.back() = x;
      return;
    }
    tr_.t.push_back(t);
    tr_.x.push_back(x);
  }

  void free_step(double& t, double& x) {
    const std::size_t piece = lock_piece(t, x);
    const double nb = next_break(t);
    const double h = std::min(h_max_, nb - t);
    if (!(h > 0.0)) throw Error(ErrorKind::step_underflow, "zero step at t=" + fmt_num(t));

    std::vector<std::pair<std::size_t, double>> watch;  // curve, starting side
    for (std::size_t k = 0; k < p_.curves.size(); ++k)
      if (p_.curves[k].active(t) && p_.curves[k].active(t + h)) watch.push_back({k, side_sign(k, t, x)});

    auto hits = [&](double hh) -> std::optional<std::size_t> {
      const double x1 = rk4(piece, t, x, hh);
      for (const auto& [k, s0] : watch)
        if (crossed(k, s0, t + hh, x1)) return k;
      return std::nullopt;
    };

    const double x1 = rk4(piece, t, x, h);
    if (hits(h)) {
      // earliest contact: bisect on the step length
      double lo = 0.0, hi = h;
      while (hi - lo > o_.event_tol) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        if (hits(m)) hi = m;
        else lo = m;
      }
      const std::size_t k = *hits(hi);
      const double te = t + hi, xe = rk4(piece, t, x, hi);
      const auto& c = p_.curves[k];
      if (c.cls.kind == CurveKind::not_admissible || c.cls.kind == CurveKind::unclassified)
        throw Error(ErrorKind::curve_contact_unclassified,
                    "state reached curve " + c.name + " (" + to_string(c.cls.kind) + ") at t=" + fmt_num(te));
      if (c.cls.kind == CurveKind::viable) {
        t = te;
        x = c.at(te);
        push_knot(t, x);
        return;  // run() starts the slide
      }
      t = te;
      x = xe;
      push_knot(t, x);
      tr_.crossings.push_back({te, k});
      return;
    }

    const std::size_t after = p_.f.owner(Vec{t + h, x1}).value_or(piece);
    if (after != piece && !contact(t + h, x1)) {
      region_change(piece, t, x, h);
      return;
    }
    t = (h == nb - t) ? nb : t + h;
    x = x1;
    push_knot(t, x);
  }

  // owner changed inside a step away from every curve: accept only t-driven
  // changes or changes where both pieces agree
  void region_change(std::size_t piece, double& t, double& x, double h) {
    auto differs = [&](double hh) {
      const auto o = p_.f.owner(Vec{t + hh, rk4(piece, t, x, hh)});
      return !o || *o != piece;
    };
    double lo = 0.0, hi = h;
    while (hi - lo > o_.event_tol) {
      const double m = 0.5 * (lo + hi);
      if (m <= lo || m >= hi) break;
      if (differs(m)) hi = m;
      else lo = m;
    }
    const double th = t + hi, xh = rk4(piece, t, x, hi);
    const double xl = rk4(piece, t, x, lo);
    const auto o_t = p_.f.owner(Vec{th, xl});
    const std::size_t next = p_.f.owner(Vec{th, xh}).value_or(piece);
    const bool t_driven = !o_t || *o_t != piece;
    const bool agree = std::abs(fk(piece, th, xh) - fk(next, th, xh)) <= 1e-9 * std::max(1.0, std::abs(xh));
    if (!t_driven && !agree)
      throw Error(ErrorKind::uncovered_interface,
                  "x-discontinuity of f at (" + fmt_num(th) + ", " + fmt_num(xh) + ") not on a declared curve");
    if (!(hi > 0.0)) throw Error(ErrorKind::step_underflow, "no progress across interface at t=" + fmt_num(t));
    t = th;
    x = xh;
    push_knot(t, x);
  }

  void slide(std::size_t k, double& t, double& x) {
    const auto& c = p_.curves[k];
    const double end = std::min(c.d, p_.b);
    const double t0 = t;
    push_knot(t, c.at(t));
    while (t < end) {
      const double h = std::min(h_max_, end - t);
      t = (h == end - t) ? end : t + h;
      push_knot(t, c.at(t));
    }
    x = c.at(t);
    tr_.sliding.push_back({t0, t, k});
    tr_.sliding_curves.push_back(c.gamma);
  }

  const IVProblem& p_;
  double h_max_;
  SolveOptions o_;
  Trajectory tr_;
};

}  // namespace detail

/// RK4 with the owning piece held fixed over each step, event detection on
/// every declared curve, crossing of inviable curves and sliding along viable
/// ones until the curve ends. Curves must be classified first.
inline Trajectory solve_ivp(const IVProblem& p, double h_max, const SolveOptions& o = {}) {
  p.validate();
  if (!(h_max > 0.0)) throw Error(ErrorKind::invalid_argument, "h_max must be positive");
  for (const auto& k : p.curves)
    if (k.cls.kind == CurveKind::unclassified)
      throw Error(ErrorKind::invalid_argument, "curve " + k.name + " is unclassified; run classify_curves first");
  return detail::Integrator(p, h_max, o).run();
}

// ---------------------------------------------------------------------------
// Verification against x(t) = x_a + integral_a^t f(s, x(s)) ds.

struct VerifyReport {
  double r_inf = 0.0;          ///< max over knots of the integral-equation residual
  double worst_t = 0.0;
  bool k_holds = true;         ///< |x(t) - x(s)| <= integral_s^t M on all knot pairs
  std::optional<std::pair<double, double>> k_witness;
  double bound = 0.0;          ///< |x_a| + integral of M
  bool bound_holds = true;
  double tol = 0.0;
  bool pass() const { return r_inf <= tol && k_holds && bound_holds; }

  std::string to_text() const {
    std::string s = "residual (sup over knots): " + fmt_num(r_inf) + " at t=" + fmt_num(worst_t) + "\n";
    s += "tolerance: " + fmt_num(tol) + "\n";
    s += "K-membership: " + std::string(k_holds ? "holds" : "fails");
    if (k_witness) s += " at (" + fmt_num(k_witness->first) + ", " + fmt_num(k_witness->second) + ")";
    s += "\na-priori bound " + fmt_num(bound) + ": " + (bound_holds ? "holds" : "fails") + "\n";
    s += std::string("verdict: ") + (pass() ? "pass" : "fail") + "\n";
    return s;
  }
};

namespace detail {

/// Integral of M between consecutive knots.
inline std::vector<double> knot_bound_integrals(const IVProblem& p, const std::vector<double>& ts) {
  std::vector<double> cum(ts.size(), 0.0);
  for (std::size_t i = 1; i < ts.size(); ++i)
    cum[i] = cum[i - 1] + integrate([&](double s) { return p.bound(s); }, ts[i - 1], ts[i]);
  return cum;
}

inline std::optional<std::pair<double, double>> k_violation(const std::vector<double>& ts, const std::vector<double>& xs,
                                                            const std::vector<double>& cum, double tol) {
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = i + 1; j < ts.size(); ++j)
      if (std::abs(xs[j] - xs[i]) > cum[j] - cum[i] + tol * (1.0 + std::abs(cum[j] - cum[i])))
        return std::pair{ts[i], ts[j]};
  return std::nullopt;
}

}  // namespace detail

inline VerifyReport verify_solution(const IVProblem& p, const Trajectory& tr, double tol) {
  if (tr.t.empty() || tr.t.front() != p.a || tr.t.back() < p.b)
    throw Error(ErrorKind::invalid_argument, "trajectory does not span [a, b]");
  VerifyReport r;
  r.tol = tol;
  const std::size_t n = tr.t.size();
  const auto panels = parallel_map<double>(n - 1, [&](std::size_t i) {
    return integrate([&](double s) { return p.fval(s, tr.at(s)); }, tr.t[i], tr.t[i + 1]);
  });
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) acc += panels[i - 1];
    const double res = std::abs(tr.x[i] - p.x_a - acc);
    if (res > r.r_inf) {
      r.r_inf = res;
      r.worst_t = tr.t[i];
    }
  }
  const auto cum = detail::knot_bound_integrals(p, tr.t);
  r.k_witness = detail::k_violation(tr.t, tr.x, cum, kMembershipTol);
  r.k_holds = !r.k_witness;
  r.bound = apriori_bound(p);
  r.bound_holds = tr.sup_norm() <= r.bound + kMembershipTol;
  return r;
}

// ---------------------------------------------------------------------------
// Picard iteration of the integral operator on a fixed grid.

struct PicardStep {
  double delta;  ///< sup-norm change over the grid
  bool k_holds;
};

/// n iterates of x -> x_a + integral_a^t f(s, x(s)) ds, starting from the
/// knot values of `x0` on its own grid.
inline std::vector<PicardStep> picard_iterate(const IVProblem& p, const Trajectory& x0, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "need at least one iteration");
  Trajectory cur;
  cur.t = x0.t;
  cur.x = x0.x;
  const auto cum = detail::knot_bound_integrals(p, cur.t);
  std::vector<PicardStep> out;
  for (std::size_t it = 0; it < n; ++it) {
    const auto panels = parallel_map<double>(cur.t.size() - 1, [&](std::size_t i) {
      return integrate([&](double s) { return p.fval(s, cur.at(s)); }, cur.t[i], cur.t[i + 1], 1e-12);
    });
    Trajectory next = cur;
    double acc = 0.0, delta = 0.0;
    for (std::size_t i = 0; i < cur.t.size(); ++i) {
      if (i) acc += panels[i - 1];
      next.x[i] = p.x_a + acc;
      delta = std::max(delta, std::abs(next.x[i] - cur.x[i]));
    }
    out.push_back({delta, !detail::k_violation(next.t, next.x, cum, kMembershipTol)});
    cur = std::move(next);
  }
  return out;
}

/// Uniform grid trajectory with constant value v, a starting guess for picard_iterate.
inline Trajectory constant_guess(const IVProblem& p, std::size_t panels, double v) {
  Trajectory tr;
  for (std::size_t i = 0; i <= panels; ++i) {
    tr.t.push_back(i == panels ? p.b : p.a + (p.b - p.a) * static_cast<double>(i) / static_cast<double>(panels));
    tr.x.push_back(v);
  }
  return tr;
}

}  // namespace ccdeg

#endif  // CCDEG_IVP_HPP
