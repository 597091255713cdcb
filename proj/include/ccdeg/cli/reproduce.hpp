#ifndef CCDEG_CLI_REPRODUCE_HPP
#define CCDEG_CLI_REPRODUCE_HPP

#include <string>
#include <vector>

#include "ccdeg/fixpoint.hpp"

namespace ccdeg::cli {

struct WorkedCheck {
  std::string name;
  std::string computed;
  std::string expected;
  bool pass = false;
  std::string note;
};

/// T = 1/3 on [0,1/3], 2/3 on (1/3,2/3], 1 on (2/3,1], over `domain`.
inline PiecewiseMap three_step_map(Interval domain) {
  return step_map(domain, {1.0 / 3.0, 2.0 / 3.0}, {1.0 / 3.0, 2.0 / 3.0, 1.0});
}

/// 1/2 on (-1, 0], -1/2 on (0, 1), over [-1, 1].
inline PiecewiseMap half_sign_map() {
  const Expr x = Expr::var(0);
  return PiecewiseMap(Box{{-1.0, 1.0}}, 1,
                      {Piece{Region({{x, false}}), {Expr(0.5)}}, Piece{Region({{-x, true}}), {Expr(-0.5)}}});
}

/// The worked examples: the three-step map and its half, and the half-sign map
/// whose degree is 1 although it has no fixed point.
inline std::vector<WorkedCheck> worked_example_checks() {
  std::vector<WorkedCheck> out;
  const PiecewiseMap t = three_step_map({0.0, 1.0});
  const PiecewiseMap s = t.scaled(0.5);
  const Box unit{{0.0, 1.0}};

  const ConditionReport ct = check_condition(t, unit, 1000);
  out.push_back({"step map condition on [0,1]", ct.holds() ? "holds" : "fails", "holds", ct.holds(), ""});

  const ConvexBody es = envelope_exact(s, Vec{1.0 / 3.0}).value;
  const bool env_ok = std::abs(es.as_interval().lo - 1.0 / 6.0) <= 1e-12 && std::abs(es.as_interval().hi - 1.0 / 3.0) <= 1e-12;
  out.push_back({"half step map envelope at 1/3", es.str(), "[1/6;1/3]", env_ok, ""});

  const ConditionReport cs = check_condition(s, unit, 1000);
  std::string where;
  for (const auto& v : cs.violations) where += (where.empty() ? "" : " ") + fmt_vec(v.x);
  const bool only_third = cs.violations.size() == 1 && std::abs(cs.violations[0].x[0] - 1.0 / 3.0) <= 1e-12;
  out.push_back({"half step map condition violations", where.empty() ? "none" : where, "1/3 only", only_third, ""});

  const PiecewiseMap r = half_sign_map();
  const Box sym{{-1.0, 1.0}};
  const DegreeReport dr = degree_1d(r, sym);
  out.push_back({"half-sign map boundary degree on (-1,1)", std::to_string(*dr.boundary_degree), "1",
                 dr.boundary_degree == 1, ""});

  const PropertyReport pb = verify_borsuk(r, sym);
  out.push_back({"half-sign map odd-degree check", to_string(pb.status), "pass", pb.status == CheckStatus::pass, ""});

  const LocalizeResult lr = localize_fixed_points(r, sym, 1e-8);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : lr.certificates) best = std::min(best, c.residual);
  out.push_back({"half-sign map smallest residual at width 1e-8", fmt_num(best), ">= 0.4", best >= 0.4,
                 "no fixed point although the degree is 1"});

  const bool zero_flagged = dr.condition && dr.condition->violations.size() == 1 &&
                            dr.condition->violations[0].x[0] == 0.0;
  out.push_back({"half-sign map condition violation", zero_flagged ? "x=0" : "missing", "x=0", zero_flagged,
                 "{0} ∩ env(0) = {0} is nonempty and T(0) = 1/2, so the condition fails at 0"});

  const PiecewiseMap te = three_step_map({-2.0, 2.0});
  const PropertyReport add = verify_additivity(te, Box{{0.0, 1.2}}, Box{{0.0, 0.6}}, Box{{0.6, 1.2}});
  std::string degs;
  for (const auto& [n, d] : add.degrees) degs += (degs.empty() ? "" : " ") + std::to_string(d);
  out.push_back({"step map degrees on (0,1.2), (0,0.6), (0.6,1.2)", degs, "1 0 1", add.status == CheckStatus::pass &&
                 degs == "1 0 1", ""});
  return out;
}

}  // namespace ccdeg::cli

#endif  // CCDEG_CLI_REPRODUCE_HPP
