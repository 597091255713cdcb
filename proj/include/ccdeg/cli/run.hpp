#ifndef CCDEG_CLI_RUN_HPP
#define CCDEG_CLI_RUN_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "ccdeg/cli/reproduce.hpp"
#include "ccdeg/cli/scenario.hpp"
#include "ccdeg/cli/svg.hpp"
#include "ccdeg/degree.hpp"
#include "ccdeg/fixpoint.hpp"
#include "ccdeg/ivp.hpp"

namespace ccdeg::cli {

enum Exit : int { ok = 0, error = 1, negative = 2 };

struct RunOptions {
  std::optional<double> tol;
  std::optional<std::size_t> grid;
  std::optional<std::uint64_t> seed;
};

struct Report {
  std::string csv, txt, svg;
  int exit = Exit::ok;
};

namespace detail {

inline double tol_of(const Scenario& s, const RunOptions& o, double fallback) {
  return o.tol ? *o.tol : s.number("tol", fallback);
}
inline std::size_t grid_of(const Scenario& s, const RunOptions& o, std::size_t fallback) {
  return o.grid ? *o.grid : s.count("grid", fallback);
}

inline std::vector<double> plot_xs(const PiecewiseMap& m, const Box& b, std::size_t n) {
  std::vector<double> xs;
  for (const auto& p : grid_points(b, n)) xs.push_back(p[0]);
  for (const auto& p : m.interface_points(b, n)) xs.push_back(p[0]);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

/// Envelope values against x: the graph of T with set-valued points drawn as vertical bars.
inline SvgPlot envelope_plot(const PiecewiseMap& m, const Box& b, std::size_t n, const std::string& title) {
  SvgPlot plot(title, "x", "env(x)");
  for (double x : plot_xs(m, b, n)) {
    const Interval e = envelope_exact(m, Vec{x}).value.as_interval();
    if (e.width() > 0.0) plot.segment(x, e.lo, x, e.hi, "#1f77b4", 2.5);
    else plot.marker(x, e.lo, "#1f77b4", 1.2);
  }
  return plot;
}

inline std::string curve_block(const IVProblem& p) {
  std::string out;
  for (const auto& k : p.curves) {
    out += "curve " + k.name + " on [" + fmt_num(k.c) + "," + fmt_num(k.d) + "]: " + to_string(k.cls.kind);
    if (k.cls.kind == CurveKind::inviable)
      out += " (" + std::string(to_string(k.cls.direction)) + ", eps=" + fmt_num(k.cls.eps) + ", psi=" + fmt_num(k.cls.psi) + ")";
    if (k.cls.witness) out += " witness (t, y)=(" + fmt_vec(*k.cls.witness) + ")";
    out += "; grid " + std::to_string(k.cls.t_grid) + " x " + std::to_string(k.cls.y_grid) + "\n";
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline Report run_envelope(const Scenario& s, const RunOptions& o) {
  const PiecewiseMap& m = *s.map;
  const Entry* pe = s.param("points");
  if (!pe) s.fail_section(s.params.line ? s.params.line : 1, "[params] needs 'points'");
  const auto pts = s.parser(*pe).points(m.input_dim());
  const std::string mode = s.word("mode", "exact");
  if (mode != "exact" && mode != "sampled") s.fail_at(*s.param("mode"), "mode is exact or sampled");
  const double tol = detail::tol_of(s, o, mode == "exact" ? kPredicateTol : 1e-6);

  Report r;
  r.csv = "x,mode,envelope,Tx,steps\n";
  r.txt = "envelope (" + mode + ")\n";
  for (const auto& x : pts) {
    const EnvelopeResult e = mode == "exact" ? envelope_exact(m, x, tol) : envelope_sampled(m, x, tol);
    r.csv += fmt_vec(x) + "," + mode + "," + e.value.str() + "," + fmt_vec(m.evaluate(x)) + "," +
             std::to_string(e.epsilon_trace.size()) + "\n";
    r.txt += "  x=(" + fmt_vec(x) + "): " + e.value.str();
    if (!e.epsilon_trace.empty())
      r.txt += " after " + std::to_string(e.epsilon_trace.size()) + " radii, last eps " +
               fmt_num(e.epsilon_trace.back().epsilon);
    r.txt += "\n";
  }
  if (s.majorant) {
    const IntervalMajorant maj(*s.majorant);
    std::vector<Vec> checks = grid_points(m.domain(), 1000);
    for (const auto& p : m.interface_points(m.domain(), 1000)) checks.push_back(p);
    for (const auto& p : pts) checks.push_back(p);
    const MinimalityReport mr = check_minimality(m, maj, checks);
    r.txt += "minimality against the majorant: " + std::string(mr.holds() ? "holds" : "fails") + " at " +
             std::to_string(mr.checked) + " points\n";
    if (!mr.selection_failures.empty())
      r.txt += "  T leaves the majorant at x=(" + fmt_vec(mr.selection_failures.front()) + ")\n";
    if (!mr.violations.empty()) r.txt += "  envelope exceeds the majorant at x=(" + fmt_vec(mr.violations.front()) + ")\n";
    if (!mr.holds()) r.exit = Exit::negative;
  }
  if (m.input_dim() == 1 && m.output_dim() == 1) {
    SvgPlot plot = detail::envelope_plot(m, m.domain(), s.count("plot_samples", 400), "closed-convex envelope");
    for (const auto& x : pts) {
      const Interval e = envelope_exact(m, x).value.as_interval();
      plot.segment(x[0], e.lo, x[0], e.hi, "#d62728", 3.0);
      plot.marker(x[0], m.evaluate(x)[0], "#d62728", 3.0);
    }
    r.svg = plot.render();
  }
  return r;
}

inline Report run_condition(const Scenario& s, const RunOptions& o) {
  const PiecewiseMap& m = *s.map;
  const Box scan = s.box("scan").value_or(m.domain());
  const std::size_t grid = detail::grid_of(s, o, scan.dim() == 1 ? 1000 : 200);
  const double tol = detail::tol_of(s, o, kMembershipTol);
  const ConditionReport c = check_condition(m, scan, grid, tol);

  Report r;
  r.csv = c.to_csv();
  r.txt = "compatibility condition on " + scan.str() + ": " + (c.holds() ? "holds" : "fails") + "\n";
  r.txt += "scanned " + std::to_string(c.scanned.size()) + " points (grid " + std::to_string(grid) + " plus interfaces)\n";
  for (const auto& v : c.violations)
    r.txt += "  violation at x=(" + fmt_vec(v.x) + "): env=" + v.envelope.str() + ", Tx=(" + fmt_vec(v.tx) + ")\n";
  r.exit = c.holds() ? Exit::ok : Exit::negative;
  if (m.input_dim() == 1 && m.output_dim() == 1) {
    SvgPlot plot = detail::envelope_plot(m, scan, 400, "condition scan");
    plot.segment(scan[0].lo, scan[0].lo, scan[0].hi, scan[0].hi, "#7f7f7f", 1.0);
    for (const auto& v : c.violations) plot.marker(v.x[0], v.x[0], "#d62728", 5.0);
    r.svg = plot.render();
  }
  return r;
}

inline Report run_homotopy(const Scenario& s, const RunOptions& o, const Box& omega) {
  const HomotopyFamily h(*s.map);
  DegreeOptions opts;
  opts.membership_tol = detail::tol_of(s, o, kMembershipTol);
  opts.condition_grid = detail::grid_of(s, o, 0);
  const HomotopyReport hr = homotopy_degree_bridge(h, omega, s.count("t_steps", 64), opts);
  Report r;
  r.txt = hr.to_text();
  r.csv = "quantity,value\n";
  r.csv += "status," + std::string(to_string(hr.status)) + "\n";
  r.csv += "degree_t0," + (hr.degree_t0 ? std::to_string(*hr.degree_t0) : std::string("-")) + "\n";
  r.csv += "degree_t1," + (hr.degree_t1 ? std::to_string(*hr.degree_t1) : std::string("-")) + "\n";
  r.csv += "certified_points," + std::to_string(hr.certified_points) + "\n";
  r.csv += "t_modulus," + fmt_num(hr.modulus_coarse) + "\n";
  r.csv += "t_modulus_fine," + fmt_num(hr.modulus_fine) + "\n";
  for (double t : hr.unstable_t) r.csv += "condition_fails_at_t," + fmt_num(t) + "\n";
  r.exit = hr.status == CheckStatus::pass ? Exit::ok : Exit::negative;
  return r;
}

inline Report run_degree(const Scenario& s, const RunOptions& o) {
  const PiecewiseMap& m = *s.map;
  const Entry* oe = s.param("omega");
  if (!oe) s.fail_section(s.params.line ? s.params.line : 1, "[params] needs 'omega'");
  const Box omega = s.parser(*oe).box();
  if (s.flag("homotopy", false)) return run_homotopy(s, o, omega);
  if (omega.dim() != m.input_dim()) s.fail_at(*oe, "omega dimension differs from the map");

  DegreeOptions opts;
  opts.membership_tol = detail::tol_of(s, o, kMembershipTol);
  opts.condition_grid = detail::grid_of(s, o, 0);
  const DegreeReport d = degree(m, omega, opts);
  Report r;
  r.csv = d.to_csv();
  r.txt = d.to_text();
  bool property_failed = false;
  auto add = [&](const PropertyReport& p) {
    r.txt += p.to_text();
    property_failed |= p.status == CheckStatus::fail;
  };
  if (const Entry* se = s.param("split")) {
    const double cut = s.parser(*se).number();
    if (!(cut > omega[0].lo && cut < omega[0].hi)) s.fail_at(*se, "split must lie inside omega's first axis");
    add(verify_additivity(m, omega, omega.with_axis(0, {omega[0].lo, cut}), omega.with_axis(0, {cut, omega[0].hi}), opts));
  }
  if (const Entry* ee = s.param("excise")) add(verify_excision(m, omega, s.parser(*ee).box(), opts));
  if (s.flag("borsuk", false)) add(verify_borsuk(m, omega, opts));

  r.exit = (d.well_defined && d.degree && *d.degree != 0 && !property_failed) ? Exit::ok : Exit::negative;

  if (omega.dim() == 1) {
    SvgPlot plot("x - env(x) on omega", "x", "x - env(x)");
    for (double x : detail::plot_xs(m, omega, 400)) {
      const Interval e = envelope_exact(m, Vec{x}).value.affine(Vec{x}, -1.0).as_interval();
      if (e.width() > 0.0) plot.segment(x, e.lo, x, e.hi, "#1f77b4", 2.5);
      else plot.marker(x, e.lo, "#1f77b4", 1.2);
    }
    plot.segment(omega[0].lo, 0.0, omega[0].hi, 0.0, "#7f7f7f", 1.0);
    r.svg = plot.render();
  } else {
    SvgPlot plot("image of the boundary under x - T x", "g1", "g2");
    std::vector<std::pair<double, double>> curve;
    for (const auto& x : box_boundary_walk(omega, 256)) {
      const Vec g = x - m.evaluate(x);
      curve.push_back({g[0], g[1]});
    }
    curve.push_back(curve.front());
    plot.polyline(curve, "#1f77b4");
    plot.marker(0.0, 0.0, "#d62728", 4.0);
    r.svg = plot.render();
  }
  return r;
}

inline Report run_fixpoint(const Scenario& s, const RunOptions& o) {
  const PiecewiseMap& m = *s.map;
  FixedPointOptions opts;
  opts.min_width = s.number("min_width", 1e-8);
  opts.localize.degree.membership_tol = detail::tol_of(s, o, kMembershipTol);
  opts.grid = detail::grid_of(s, o, 0);
  const double accept = s.number("accept", 1e-6);
  const std::string method = s.word("method", "localize");

  Report r;
  LocalizeResult loc;
  std::optional<FixedPointCertificate> pick;
  if (method == "localize") {
    const Entry* oe = s.param("omega");
    const Box omega = oe ? s.parser(*oe).box() : m.domain();
    loc = localize_fixed_points(m, omega, opts.min_width, opts.localize);
    pick = loc.best();
    r.txt = "localization on " + omega.str() + "\n";
  } else if (method == "schauder") {
    const Entry* se = s.param("set");
    if (!se) s.fail_section(s.params.line ? s.params.line : 1, "schauder needs 'set' (a box)");
    const Box b = s.parser(*se).box();
    const ConvexBody mset = b.dim() == 1 ? ConvexBody::interval(b[0].lo, b[0].hi)
                                         : convex_hull({Vec{b[0].lo, b[1].lo}, Vec{b[0].hi, b[1].lo},
                                                        Vec{b[0].hi, b[1].hi}, Vec{b[0].lo, b[1].hi}});
    const SchauderResult sr = schauder_fixed_point(m, mset, opts);
    loc = sr.localization;
    pick = sr.certificate;
    r.txt = "self-map of M=" + mset.str() + " certified at " + std::to_string(sr.self_map_points) + " points\n";
    r.txt += "condition on M: holds\nretraction onto M, work box " + sr.work.str() + "\n";
  } else if (method == "schaefer") {
    const SchaeferResult sr = schaefer_search(m, s.number("r_max", 8.0), opts);
    loc = sr.localization;
    pick = sr.certificate;
    r.txt = "accepted R=" + fmt_num(sr.radius);
    if (!sr.rejected.empty()) {
      r.txt += " (rejected";
      for (double x : sr.rejected) r.txt += " " + fmt_num(x);
      r.txt += ")";
    }
    r.txt += "\n";
  } else {
    s.fail_at(*s.param("method"), "method is localize, schauder or schaefer");
  }
  r.csv = loc.to_csv();
  r.txt += "total degree " + std::to_string(loc.total_degree) + ", " + std::to_string(loc.certificates.size()) +
           " certificate(s), " + std::to_string(loc.audit.size()) + " splits (" +
           (loc.additive() ? "all additive" : "NOT additive") + "), " + std::to_string(loc.perturbed) +
           " perturbed cut(s), " + std::to_string(loc.pruned) + " pruned\n";
  for (const auto& c : loc.certificates)
    r.txt += "  " + c.box.str() + " degree " + std::to_string(c.degree) + ", condition " +
             (c.condition_holds ? "holds" : "fails") + ", x*=(" + fmt_vec(c.point) + "), residual " + fmt_num(c.residual) + "\n";
  const bool found = pick && pick->condition_holds && pick->residual <= accept;
  if (pick) r.txt += "representative: x*=(" + fmt_vec(pick->point) + "), residual " + fmt_num(pick->residual) + "\n";
  r.txt += found ? "fixed point found\n" : "no fixed point resolved within " + fmt_num(accept) + "\n";
  r.exit = found ? Exit::ok : Exit::negative;
  if (m.input_dim() == 1) {
    SvgPlot plot = detail::envelope_plot(m, m.domain(), 400, "fixed-point certificates");
    plot.segment(m.domain()[0].lo, m.domain()[0].lo, m.domain()[0].hi, m.domain()[0].hi, "#7f7f7f", 1.0);
    for (const auto& c : loc.certificates) plot.marker(c.point[0], c.point[0], "#d62728", 5.0);
    r.svg = plot.render();
  }
  return r;
}

inline Report run_ode(const Scenario& s, const RunOptions& o) {
  IVProblem p = *s.ode;
  ClassifyOptions co;
  co.t_grid = s.count("classify_t", 1000);
  co.y_grid = s.count("classify_y", 100);
  classify_curves(p, co);
  const double h = s.number("h_max", 0.01);
  const double tol = detail::tol_of(s, o, 1e-6);

  Report r;
  r.txt = detail::curve_block(p);
  const Trajectory tr = solve_ivp(p, h);
  const VerifyReport v = verify_solution(p, tr, tol);
  r.csv = tr.to_csv();
  r.txt += "knots " + std::to_string(tr.t.size()) + ", x(" + fmt_num(tr.t.back()) + ") = " + fmt_num(tr.x.back()) + "\n";
  for (const auto& e : tr.crossings)
    r.txt += "  crossing of " + p.curves[e.curve].name + " at t=" + fmt_num(e.t) + "\n";
  for (const auto& si : tr.sliding)
    r.txt += "  sliding on " + p.curves[si.curve].name + " over [" + fmt_num(si.t0) + "," + fmt_num(si.t1) + "]\n";
  r.txt += v.to_text();
  if (const std::size_t n = s.count("picard", 0)) {
    const auto steps = picard_iterate(p, constant_guess(p, s.count("picard_panels", 200), p.x_a), n);
    r.txt += "picard deltas:";
    for (const auto& st : steps) r.txt += " " + fmt_num(st.delta) + (st.k_holds ? "" : "(K fails)");
    r.txt += "\n";
  }
  r.exit = v.pass() ? Exit::ok : Exit::negative;

  SvgPlot plot("trajectory", "t", "x");
  for (const auto& k : p.curves) {
    std::vector<std::pair<double, double>> g;
    for (int i = 0; i <= 200; ++i) {
      const double t = k.c + (k.d - k.c) * i / 200.0;
      g.push_back({t, k.at(t)});
    }
    plot.polyline(g, "#7f7f7f", 1.0);
  }
  std::vector<std::pair<double, double>> xs;
  for (std::size_t i = 0; i < tr.t.size(); ++i) xs.push_back({tr.t[i], tr.x[i]});
  plot.polyline(xs, "#1f77b4", 2.0);
  for (const auto& e : tr.crossings) plot.marker(e.t, tr.at(e.t), "#d62728", 4.0);
  r.svg = plot.render();
  return r;
}

inline Report run_reproduce(const Scenario&, const RunOptions&) {
  Report r;
  r.csv = "check,computed,expected,verdict\n";
  bool all = true;
  for (const auto& c : worked_example_checks()) {
    r.csv += c.name + "," + c.computed + "," + c.expected + "," + (c.pass ? "PASS" : "FAIL") + "\n";
    r.txt += std::string(c.pass ? "PASS " : "FAIL ") + c.name + ": " + c.computed + " (expected " + c.expected + ")\n";
    if (!c.note.empty()) r.txt += "     " + c.note + "\n";
    all &= c.pass;
  }
  const PiecewiseMap half = three_step_map({0.0, 1.0}).scaled(0.5);
  SvgPlot plot = detail::envelope_plot(half, half.domain(), 400, "envelope of the half step map");
  plot.segment(0.0, 0.0, 1.0, 1.0, "#7f7f7f", 1.0);
  plot.marker(1.0 / 3.0, 1.0 / 3.0, "#d62728", 5.0);
  r.svg = plot.render();
  r.exit = all ? Exit::ok : Exit::negative;
  return r;
}

inline Report run_scenario(const Scenario& s, const RunOptions& o = {}) {
  switch (s.kind) {
    case Kind::envelope: return run_envelope(s, o);
    case Kind::condition: return run_condition(s, o);
    case Kind::degree: return run_degree(s, o);
    case Kind::fixpoint: return run_fixpoint(s, o);
    case Kind::ode: return run_ode(s, o);
    case Kind::reproduce: return run_reproduce(s, o);
  }
  return {};
}

/// Writes report.csv, report.txt and (when there is one) plot.svg into `dir`.
inline void write_report(const Report& r, const Scenario& s, const RunOptions& o, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const char* name, const std::string& body) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error(ErrorKind::invalid_argument, "cannot write " + (dir / name).string());
    f << body;
  };
  std::string head = "scenario: " + s.raw.file + "\nkind: " + to_string(s.kind) + "\n";
  if (o.seed) head += "seed: " + std::to_string(*o.seed) + "\n";
  head += "exit: " + std::to_string(r.exit) + "\n\n";
  put("report.csv", r.csv);
  put("report.txt", head + r.txt);
  if (!r.svg.empty()) put("plot.svg", r.svg);
}

// ---------------------------------------------------------------------------

/// Static checks without running the analysis: cover of the domain, finite
/// piece values on region closures, and for ODE problems the growth bound
/// and curve coverage of every x-discontinuity.
inline std::string validate_scenario(const Scenario& s) {
  if (s.kind == Kind::reproduce) return "ok\n";
  const PiecewiseMap& m = *s.map;
  const std::size_t per_axis = m.input_dim() == 1 ? 100000 : (m.input_dim() == 2 ? 1000 : 100);
  if (auto gap = find_cover_gap(m, per_axis))
    throw Error(ErrorKind::cover_violated, "no piece covers (" + fmt_vec(*gap) + ")");
  if (auto bad = find_closure_defect(m, std::min<std::size_t>(per_axis, 1000)))
    throw Error(ErrorKind::domain, "piece value is not finite at (" + fmt_vec(*bad) + ")");
  if (s.majorant)
    if (auto gap = find_cover_gap(*s.majorant, per_axis))
      throw Error(ErrorKind::cover_violated, "no majorant piece covers (" + fmt_vec(*gap) + ")");
  if (s.ode) {
    if (auto w = check_growth_bound(*s.ode))
      throw Error(ErrorKind::invalid_argument, "growth bound violated at (t, x)=(" + fmt_vec(w->point) + "): " + w->detail);
    if (auto w = check_curve_coverage(*s.ode))
      throw Error(ErrorKind::uncovered_interface, w->detail + " at (t, x)=(" + fmt_vec(w->point) + ")");
  }
  return "ok\n";
}

}  // namespace ccdeg::cli

#endif  // CCDEG_CLI_RUN_HPP
