// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Reference values come from the oracles in tests/, never from the library.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ccdeg/degree.hpp"
#include "ccdeg/fixpoint.hpp"
#include "ccdeg/ivp.hpp"
#include "oracles.hpp"
#include "problems.hpp"

using namespace ccdeg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = "first failure: " + what + "; " + detail;
    pass = pass && ok;
  }
};

struct Criterion {
  int id;
  std::string name;
  std::string tolerances;
  double limit_s;  ///< 0: no runtime limit
  std::function<Outcome()> run;
};

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

const std::vector<std::string> kXY{"x", "y"};
Expr e2(const char* s) { return parse_expr(s, kXY); }

PiecewiseMap three_step(Interval domain) {
  return step_map(domain, {1.0 / 3.0, 2.0 / 3.0}, {1.0 / 3.0, 2.0 / 3.0, 1.0});
}

// 1/2 on (-1, 0], -1/2 on (0, 1)
PiecewiseMap half_sign() {
  const Expr x = Expr::var(0);
  return PiecewiseMap(Box{{-1.0, 1.0}}, 1,
                      {Piece{Region({{x, false}}), {Expr(0.5)}}, Piece{Region({{-x, true}}), {Expr(-0.5)}}});
}

// ---------------------------------------------------------------------------

Outcome worked_step_example() {
  Outcome o;
  const PiecewiseMap t = three_step({0.0, 1.0});
  const PiecewiseMap s = t.scaled(0.5);
  const Interval env = envelope_exact(s, Vec{1.0 / 3.0}).value.as_interval();
  o.require(std::abs(env.lo - 1.0 / 6.0) <= 1e-12 && std::abs(env.hi - 1.0 / 3.0) <= 1e-12,
            "env S(1/3) = [" + num(env.lo) + ", " + num(env.hi) + "]");
  const ConditionReport ct = check_condition(t, Box{{0.0, 1.0}}, 100000);
  o.require(ct.holds(), "condition fails for T");
  const ConditionReport cs = check_condition(s, Box{{0.0, 1.0}}, 100000);
  o.require(cs.violations.size() == 1 && std::abs(cs.violations[0].x[0] - 1.0 / 3.0) <= 1e-12,
            std::to_string(cs.violations.size()) + " violations for S");
  o.detail += "env S(1/3) = [" + num(env.lo) + ", " + num(env.hi) + "], T holds on " + std::to_string(ct.scanned.size()) +
              " points, S fails at " + std::to_string(cs.violations.size()) + " point(s)";
  return o;
}

Outcome worked_half_sign() {
  Outcome o;
  const PiecewiseMap r = half_sign();
  const Box sym{{-1.0, 1.0}};
  const DegreeReport d = degree_1d(r, sym);
  o.require(d.boundary_degree == 1, "boundary degree");
  o.require(verify_borsuk(r, sym).status == CheckStatus::pass, "odd-degree check");
  const LocalizeResult l = localize_fixed_points(r, sym, 1e-8);
  double best = INFINITY;
  for (const auto& c : l.certificates) {
    best = std::min(best, c.residual);
    o.require(c.box[0].width() <= 1e-8, "certificate wider than 1e-8");
  }
  o.require(!l.certificates.empty() && best >= 0.4, "smallest residual " + num(best));
  const bool at_zero = d.condition && d.condition->violations.size() == 1 && d.condition->violations[0].x[0] == 0.0;
  o.require(at_zero, "condition violation at 0 not reported");
  o.detail += "boundary degree " + (d.boundary_degree ? std::to_string(*d.boundary_degree) : "-") +
              ", smallest residual " + num(best) + ", violation at 0";
  return o;
}

Outcome degree_axioms() {
  Outcome o;
  oracle::Rng rng(2024);
  int maps = 0, compared = 0, mismatched = 0, add_checked = 0, add_failed = 0, exc_checked = 0, exc_failed = 0;
  while (maps < 240) {
    auto m = oracle::random_steps(rng, 6);
    if (rng.coin()) std::fill(m.q.begin(), m.q.end(), 0.0);  // piecewise constant
    ++maps;
    const PiecewiseMap t = m.to_map();
    double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3) continue;
    const auto scan = oracle::sign_scan_degree(m, a, b);
    if (!scan) continue;
    ++compared;
    std::optional<int> lib;
    try {
      lib = degree_1d(t, Box{{a, b}}).boundary_degree;
    } catch (const Error&) {
    }
    if (lib != scan) ++mismatched;

    const double c = rng.uniform(a, b);
    if (oracle::sign_scan_degree(m, a, c) && oracle::sign_scan_degree(m, c, b)) {
      const PropertyReport r = verify_additivity(t, Box{{a, b}}, Box{{a, c}}, Box{{c, b}});
      if (r.status != CheckStatus::inapplicable) {
        ++add_checked;
        add_failed += r.status != CheckStatus::pass;
      }
    }
    double u = rng.uniform(a, b), v = rng.uniform(a, b);
    if (u > v) std::swap(u, v);
    const PropertyReport e = verify_excision(t, Box{{a, b}}, Box{{u, v}});
    if (e.status != CheckStatus::inapplicable) {
      ++exc_checked;
      exc_failed += e.status != CheckStatus::pass;
    }
  }
  o.require(compared >= 200, std::to_string(compared) + " well-defined cases");
  o.require(mismatched == 0, std::to_string(mismatched) + " degree mismatches");
  o.require(add_checked > 0 && add_failed == 0, std::to_string(add_failed) + " additivity failures");
  o.require(exc_checked > 0 && exc_failed == 0, std::to_string(exc_failed) + " excision failures");

  int norm_failed = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t dim = k % 2 ? 2 : 1;
    std::vector<Interval> axes;
    Vec p(dim);
    std::vector<Expr> values;
    for (std::size_t i = 0; i < dim; ++i) {
      const double lo = rng.uniform(-3, 2), hi = lo + rng.uniform(0.1, 3);
      axes.push_back(Interval{lo, hi});
      p[i] = rng.uniform(lo + 0.01 * (hi - lo), hi - 0.01 * (hi - lo));
      values.push_back(Expr(p[i]));
    }
    const Box box{std::span<const Interval>(axes)};
    // T = p in omega: x - T x = x - p has the single regular zero p
    const PiecewiseMap t = PiecewiseMap::continuous(box, values);
    if (degree(t, box).degree != 1) ++norm_failed;
  }
  o.require(norm_failed == 0, std::to_string(norm_failed) + " normalization failures");
  o.detail += std::to_string(compared) + "/" + std::to_string(maps) + " maps compared, " + std::to_string(mismatched) +
              " mismatches; additivity " + std::to_string(add_checked - add_failed) + "/" +
              std::to_string(add_checked) + ", excision " + std::to_string(exc_checked - exc_failed) + "/" +
              std::to_string(exc_checked) + ", normalization " + std::to_string(100 - norm_failed) + "/100";
  return o;
}

// Continuous 1-d map: a random break pattern made continuous by chaining the
// offsets, plus a smooth term.
struct Continuous1 {
  oracle::AffineSteps m;
  double w;  ///< coefficient of sin(3x)

  double value(double x) const { return m.value(x) + w * std::sin(3.0 * x); }
  PiecewiseMap to_map() const {
    const PiecewiseMap base = m.to_map();
    std::vector<Piece> ps;
    for (const auto& p : base.pieces())
      ps.push_back({p.region, {p.value[0] + Expr(w) * sin(Expr(3.0) * Expr::var(0))}});
    return PiecewiseMap(base.domain(), 1, std::move(ps));
  }
};

Continuous1 random_continuous1(oracle::Rng& rng) {
  Continuous1 c{oracle::random_steps(rng, 5), rng.uniform(-0.3, 0.3)};
  for (std::size_t j = 0; j < c.m.breaks.size(); ++j) {
    const double b = c.m.breaks[j];
    c.m.p[j + 1] = c.m.p[j] + (c.m.q[j] - c.m.q[j + 1]) * b;
  }
  return c;
}

// Continuous planar map: A x + b below a random line, plus k (n.x - s) above it.
struct Continuous2 {
  double a11, a12, a21, a22, b1, b2, n1, n2, s, k1, k2;

  std::pair<double, double> value(double x, double y) const {
    const double h = std::max(0.0, n1 * x + n2 * y - s);
    return {a11 * x + a12 * y + b1 + 0.2 * std::sin(y) + k1 * h, a21 * x + a22 * y + b2 + k2 * h};
  }
  PiecewiseMap to_map() const {
    const Expr x = Expr::var(0), y = Expr::var(1);
    const Expr lin = Expr(n1) * x + Expr(n2) * y - Expr(s);
    const Expr t1 = Expr(a11) * x + Expr(a12) * y + Expr(b1) + Expr(0.2) * sin(y);
    const Expr t2 = Expr(a21) * x + Expr(a22) * y + Expr(b2);
    return PiecewiseMap(Box{{-2.0, 2.0}, {-2.0, 2.0}}, 2,
                        {Piece{Region({{lin, false}}), {t1, t2}},
                         Piece{Region::everywhere(), {t1 + Expr(k1) * lin, t2 + Expr(k2) * lin}}});
  }
};

Continuous2 random_continuous2(oracle::Rng& rng) {
  Continuous2 c{};
  c.a11 = rng.uniform(-1.5, 1.5), c.a12 = rng.uniform(-1.5, 1.5), c.a21 = rng.uniform(-1.5, 1.5);
  c.a22 = rng.uniform(-1.5, 1.5), c.b1 = rng.uniform(-0.5, 0.5), c.b2 = rng.uniform(-0.5, 0.5);
  const double phi = rng.uniform(0, 2 * std::numbers::pi);
  c.n1 = std::cos(phi), c.n2 = std::sin(phi), c.s = rng.uniform(-0.5, 0.5);
  c.k1 = rng.uniform(-1, 1), c.k2 = rng.uniform(-1, 1);
  return c;
}

double distance_to_point(const ConvexBody& env, const Vec& p) {
  double d = 0.0;
  for (const auto& v : env.vertices()) d = std::max(d, norm(v - p));
  return d;
}

Outcome continuous_reduction() {
  Outcome o;
  oracle::Rng rng(77);
  double worst = 0.0;
  int degrees = 0, mismatched = 0, on_interface = 0;
  for (int k = 0; k < 50; ++k) {
    const bool planar = k % 2;
    std::function<Vec(const Vec&)> tx;
    PiecewiseMap t;
    Continuous1 c1;
    Continuous2 c2;
    std::vector<Vec> pts;
    if (!planar) {
      c1 = random_continuous1(rng);
      t = c1.to_map();
      tx = [&](const Vec& x) { return Vec{c1.value(x[0])}; };
      for (double b : c1.m.breaks) pts.push_back(Vec{b});
      while (pts.size() < 1000) pts.push_back(Vec{rng.uniform(-2, 2)});
    } else {
      c2 = random_continuous2(rng);
      t = c2.to_map();
      tx = [&](const Vec& x) {
        const auto [a, b] = c2.value(x[0], x[1]);
        return Vec{a, b};
      };
      // a third of the points on the break line
      while (pts.size() < 1000) {
        const double x = rng.uniform(-2, 2), y = rng.uniform(-2, 2);
        if (pts.size() % 3 == 0 && std::abs(c2.n2) > 0.3) {
          const double yl = (c2.s - c2.n1 * x) / c2.n2;
          if (std::abs(yl) <= 2.0) {
            pts.push_back(Vec{x, yl});
            continue;
          }
        }
        pts.push_back(Vec{x, y});
      }
    }
    for (const auto& x : pts) {
      int closures = 0;
      for (const auto& piece : t.pieces()) closures += piece.region.closure_contains(x, 1e-12);
      on_interface += closures > 1;
      worst = std::max(worst, distance_to_point(envelope_exact(t, x).value, tx(x)));
    }

    // classical degree of I - T on a random box
    for (int tries = 0; tries < 20; ++tries) {
      const double x0 = rng.uniform(-2, 1), x1 = x0 + rng.uniform(0.2, 2 - x0);
      std::optional<int> classical;
      Box omega;
      if (!planar) {
        omega = Box{{x0, std::min(x1, 2.0)}};
        const double ga = omega[0].lo - c1.value(omega[0].lo), gb = omega[0].hi - c1.value(omega[0].hi);
        if (std::abs(ga) < 1e-6 || std::abs(gb) < 1e-6) continue;
        classical = (oracle::sgn(gb) - oracle::sgn(ga)) / 2;
      } else {
        const double y0 = rng.uniform(-2, 1), y1 = y0 + rng.uniform(0.2, 2 - y0);
        omega = Box{{x0, std::min(x1, 2.0)}, {y0, std::min(y1, 2.0)}};
        classical = oracle::winding_brute(
            [&](double x, double y) {
              const auto [a, b] = c2.value(x, y);
              return std::pair{x - a, y - b};
            },
            omega[0].lo, omega[0].hi, omega[1].lo, omega[1].hi, 1u << 14, 1e-6);
        if (!classical) continue;
      }
      std::optional<int> lib;
      try {
        lib = degree(t, omega).degree;
      } catch (const Error&) {
      }
      ++degrees;
      if (lib != classical) ++mismatched;
      break;
    }
  }
  o.require(worst <= 1e-9, "envelope is not a point, Hausdorff " + num(worst));
  o.require(degrees >= 45, std::to_string(degrees) + " degrees compared");
  o.require(mismatched == 0, std::to_string(mismatched) + " degree mismatches");
  o.detail += "max Hausdorff(env, {Tx}) " + num(worst) + " over 50000 points (" + std::to_string(on_interface) +
              " on interfaces), degree " +
              std::to_string(degrees - mismatched) + "/" + std::to_string(degrees);
  return o;
}

std::pair<double, double> plane_g(double x, double y) {
  double tx, ty;
  if (x > 0.5 && y > 0) tx = -0.5, ty = 0.6;
  else if (y >= 0) tx = 0.3 * y + 0.2, ty = -0.3 * x;
  else tx = -0.4 * y, ty = 0.2 + 0.5 * x;
  return {x - tx, y - ty};
}

Outcome planar_winding() {
  Outcome o;
  const Box sq{{-1.0, 1.0}, {-1.0, 1.0}};
  const auto minus = degree(PiecewiseMap::continuous(sq, {e2("-x"), e2("-y")}), sq).degree;
  const auto far = degree(PiecewiseMap::continuous(sq, {Expr(5.0), Expr(5.0)}), sq).degree;
  o.require(minus == 1, "T = -x");
  o.require(far == 0, "T = (5,5)");
  const PiecewiseMap plane(sq, 2,
                           {Piece{Region({{e2("1/2 - x"), true}, {e2("-y"), true}}), {e2("-1/2"), e2("3/5")}},
                            Piece{Region({{e2("-y"), false}}), {e2("0.3*y + 0.2"), e2("-0.3*x")}},
                            Piece{Region({{e2("y"), true}}), {e2("-0.4*y"), e2("0.2 + 0.5*x")}}});
  std::string degs;
  for (const Box& omega : {sq, Box{{-0.5, 0.9}, {-0.7, 0.6}}, Box{{0.3, 1.0}, {-1.0, 1.0}},
                           Box{{-1.0, -0.2}, {-1.0, 1.0}}}) {
    const auto brute = oracle::winding_brute(plane_g, omega[0].lo, omega[0].hi, omega[1].lo, omega[1].hi, 1u << 14);
    const auto lib = boundary_degree(plane, omega);
    o.require(brute && lib == *brute, "piecewise map on " + omega.str());
    degs += (degs.empty() ? "" : " ") + std::to_string(lib) + "=" + (brute ? std::to_string(*brute) : "?");
  }
  o.detail += "deg(-x) " + (minus ? std::to_string(*minus) : "-") + ", deg(5,5) " +
              (far ? std::to_string(*far) : "-") + ", piecewise vs brute " + degs;
  return o;
}

double max_error(const Trajectory& tr, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) e = std::max(e, std::abs(tr.x[i] - exact(tr.t[i])));
  return e;
}

Outcome ode_crossing() {
  Outcome o;
  IVProblem p = problems::crossing();
  classify_curves(p);
  const Trajectory tr = solve_ivp(p, 0.01);
  const double err = max_error(tr, [](double t) { return -1.0 + t; });
  const VerifyReport v = verify_solution(p, tr, 1e-6);
  o.require(err < 1e-6, "error " + num(err));
  o.require(tr.crossings.size() == 1 && std::abs(tr.crossings[0].t - 1.0) <= 1e-9, "crossing event");
  o.require(v.r_inf < 1e-6, "R_inf " + num(v.r_inf));
  o.detail += "error " + num(err) + ", crossing at t=" + (tr.crossings.empty() ? "-" : num(tr.crossings[0].t)) +
              ", R_inf " + num(v.r_inf);
  return o;
}

Outcome ode_sliding() {
  Outcome o;
  IVProblem p = problems::sliding();
  classify_curves(p);
  const Trajectory tr = solve_ivp(p, 0.01);
  const double err = max_error(tr, [](double t) { return t < 1.0 ? 1.0 - t : 0.0; });
  const VerifyReport v = verify_solution(p, tr, 1e-6);
  o.require(err < 1e-6, "error " + num(err));
  o.require(!tr.sliding.empty() && std::abs(tr.sliding[0].t0 - 1.0) <= 1e-9, "sliding onset");
  o.require(v.r_inf < 1e-6, "R_inf " + num(v.r_inf));
  o.detail += "error " + num(err) + ", sliding from t=" + (tr.sliding.empty() ? "-" : num(tr.sliding[0].t0)) +
              ", R_inf " + num(v.r_inf);
  return o;
}

Outcome ode_order() {
  Outcome o;
  IVProblem p = problems::curved();
  classify_curves(p);
  std::vector<double> r;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) r.push_back(verify_solution(p, solve_ivp(p, h), 1.0).r_inf);
  o.detail += "R_inf ratios";
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double ratio = r[i] / r[i + 1];
    o.require(ratio >= 3.0 && ratio <= 5.0, "ratio " + num(ratio));
    o.detail += " " + num(ratio);
  }
  return o;
}

Outcome apriori_audit() {
  Outcome o;
  struct Case {
    IVProblem p;
    double h;
  };
  std::vector<Case> cases;
  for (double h : {0.01, 0.05}) {
    cases.push_back({problems::crossing(), h});
    cases.push_back({problems::sliding(), h});
    cases.push_back({problems::moving_curve(), h});
  }
  for (double h : {0.1, 0.05, 0.025, 0.0125}) cases.push_back({problems::curved(), h});
  std::size_t pairs = 0;
  double slack = INFINITY;
  for (auto& c : cases) {
    classify_curves(c.p);
    const Trajectory tr = solve_ivp(c.p, c.h);
    // every M here is constant, so its integral is exact; the trapezoid rule is a cross-check
    const double m = c.p.M.eval(Vec{0.0, 0.0});
    const double int_m = m * (c.p.b - c.p.a);
    o.require(std::abs(oracle::trapezoid([&](double) { return m; }, c.p.a, c.p.b, 1000) - int_m) < 1e-12,
              "integral of M");
    double sup = 0.0;
    for (double x : tr.x) sup = std::max(sup, std::abs(x));
    const double bound = std::abs(c.p.x_a) + int_m;
    o.require(sup <= bound, "sup norm " + num(sup) + " above " + num(bound));
    slack = std::min(slack, bound - sup);
    for (std::size_t i = 0; i < tr.t.size(); ++i)
      for (std::size_t j = i + 1; j < tr.t.size(); ++j, ++pairs) {
        const double lhs = std::abs(tr.x[j] - tr.x[i]), rhs = m * (tr.t[j] - tr.t[i]);
        if (lhs > rhs + 1e-12 * (1.0 + rhs)) o.require(false, "K inequality at knots " + std::to_string(i) + "," +
                                                                  std::to_string(j));
      }
  }
  o.detail += std::to_string(cases.size()) + " trajectories, " + std::to_string(pairs) +
              " knot pairs, smallest bound slack " + num(slack);
  return o;
}

Outcome homotopy_bridge() {
  Outcome o;
  const std::vector<std::string> n{"x", "t"};
  auto e = [&](const char* s) { return parse_expr(s, n); };
  const HomotopyFamily h(PiecewiseMap(Box{{-3.0, 3.0}, {0.0, 1.0}}, 1,
                                      {Piece{Region({{e("x - 1/3"), false}}), {e("t/3")}},
                                       Piece{Region({{e("x - 2/3"), false}}), {e("2*t/3")}},
                                       Piece{Region::everywhere(), {e("t")}}}));
  const HomotopyReport r = homotopy_degree_bridge(h, Box{{-2.0, 2.0}});
  o.require(r.status == CheckStatus::pass, "certification");
  o.require(r.degree_t0 == 1 && r.degree_t1 == 1, "endpoint degrees");
  const bool half = std::find(r.unstable_t.begin(), r.unstable_t.end(), 0.5) != r.unstable_t.end();
  o.require(half, "condition failure at t=1/2 not reported");
  const ConditionReport c = check_condition(h.slice(0.5), Box{{-2.0, 2.0}}, 1000);
  const bool third = c.violations.size() == 1 && std::abs(c.violations[0].x[0] - 1.0 / 3.0) <= 1e-12;
  o.require(third, "S = T/2 violation at 1/3");
  o.detail += "deg t=0 " + (r.degree_t0 ? std::to_string(*r.degree_t0) : "-") + ", t=1 " +
              (r.degree_t1 ? std::to_string(*r.degree_t1) : "-") + ", " + std::to_string(r.certified_points) +
              " certified points, condition fails at " + std::to_string(r.unstable_t.size()) + " interior t";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "step map and its half: envelope, condition", "vertex tol 1e-12", 1.0, worked_step_example},
      {2, "half-sign map: degree 1, no fixed point", "width 1e-8, residual >= 0.4", 5.0, worked_half_sign},
      {3, "degree axioms on random 1-d maps", "sign scan 1e5 points, margin 1e-7", 60.0, degree_axioms},
      {4, "continuous maps: point envelope, classical degree", "Hausdorff 1e-9, winding 2^14", 0.0,
       continuous_reduction},
      {5, "planar winding", "brute winding 2^14 samples", 10.0, planar_winding},
      {6, "ODE: crossing an inviable line", "error 1e-6, event 1e-9, R_inf 1e-6", 10.0, ode_crossing},
      {6, "ODE: sliding on a viable line", "error 1e-6, onset 1e-9, R_inf 1e-6", 10.0, ode_sliding},
      {6, "ODE: order under halving h_max", "R_inf ratio in [3, 5]", 10.0, ode_order},
      {7, "a-priori bound and K-modulus audit", "K slack 1e-12 relative", 0.0, apriori_audit},
      {8, "homotopy t T and the half-step instability", "t grid 64, vertex tol 1e-12", 10.0, homotopy_bridge},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0.0 && s >= c.limit_s) o.require(false, "runtime " + num(s) + " s");
    failed += !o.pass;
    std::printf("%s  [%d] %s (%s; %.3f s%s) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.tolerances.c_str(), s, c.limit_s > 0.0 ? (" < " + num(c.limit_s) + " s").c_str() : "",
                o.detail.c_str());
  }
  std::printf("%d of %zu checks failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
