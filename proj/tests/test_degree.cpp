#include <catch_amalgamated.hpp>

#include "ccdeg/degree.hpp"
#include "oracles.hpp"

using namespace ccdeg;

namespace {

const std::vector<std::string> kXY{"x", "y"};
Expr e2(const char* s) { return parse_expr(s, kXY); }

PiecewiseMap plane_map() {
  return PiecewiseMap(Box{{-1.0, 1.0}, {-1.0, 1.0}}, 2,
                      {Piece{Region({{e2("1/2 - x"), true}, {e2("-y"), true}}), {e2("-1/2"), e2("3/5")}},
                       Piece{Region({{e2("-y"), false}}), {e2("0.3*y + 0.2"), e2("-0.3*x")}},
                       Piece{Region({{e2("y"), true}}), {e2("-0.4*y"), e2("0.2 + 0.5*x")}}});
}

std::pair<double, double> plane_g(double x, double y) {
  double tx, ty;
  if (x > 0.5 && y > 0) tx = -0.5, ty = 0.6;
  else if (y >= 0) tx = 0.3 * y + 0.2, ty = -0.3 * x;
  else tx = -0.4 * y, ty = 0.2 + 0.5 * x;
  return {x - tx, y - ty};
}

PiecewiseMap affine2(double a, double b, double c, double d, double p, double q) {
  const Expr x = Expr::var(0), y = Expr::var(1);
  return PiecewiseMap::continuous(Box{{-3.0, 3.0}, {-3.0, 3.0}},
                                  {Expr(a) * x + Expr(b) * y + Expr(p), Expr(c) * x + Expr(d) * y + Expr(q)});
}

PiecewiseMap minus_identity() { return PiecewiseMap::continuous(Box{{-1.0, 1.0}, {-1.0, 1.0}}, {e2("-x"), e2("-y")}); }

}  // namespace

TEST_CASE("1-d degree matches the sign-scan and zero-index oracles") {
  oracle::Rng rng(31);
  int compared = 0, nonzero = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto o = oracle::random_steps(rng, 6);
    const PiecewiseMap m = o.to_map();
    double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    if (a > b) std::swap(a, b);
    const auto scan = oracle::sign_scan_degree(o, a, b);
    const auto exact = oracle::zero_index_degree(o, a, b);
    if (!scan || !exact) continue;
    REQUIRE(*scan == *exact);
    REQUIRE(boundary_degree(m, Box{{a, b}}) == *scan);
    ++compared;
    nonzero += *scan != 0;
  }
  CHECK(compared > 100);
  CHECK(nonzero > 20);
}

TEST_CASE("2-d degree of affine maps is the sign of det(I - A) around the zero") {
  oracle::Rng rng(32);
  int compared = 0, inside = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(-2, 2), d = rng.uniform(-2, 2);
    const double p = rng.uniform(-1, 1), q = rng.uniform(-1, 1);
    // g(x) = (I - A) x - (p, q); zero at (I - A)^{-1} (p, q)
    const double m11 = 1 - a, m12 = -b, m21 = -c, m22 = 1 - d, det = m11 * m22 - m12 * m21;
    if (std::abs(det) < 0.05) continue;
    const double zx = (m22 * p - m12 * q) / det, zy = (m11 * q - m21 * p) / det;
    const double x0 = rng.uniform(-2, 0), y0 = rng.uniform(-2, 0);
    const Box omega{{x0, x0 + rng.uniform(0.5, 2)}, {y0, y0 + rng.uniform(0.5, 2)}};
    const double margin = std::min({std::abs(zx - omega[0].lo), std::abs(zx - omega[0].hi), std::abs(zy - omega[1].lo),
                                    std::abs(zy - omega[1].hi)});
    if (margin < 1e-3) continue;
    const bool in = omega.contains(Vec{zx, zy});
    const int expected = in ? (det > 0 ? 1 : -1) : 0;
    const auto brute = oracle::winding_brute(
        [&](double x, double y) { return std::pair{m11 * x + m12 * y - p, m21 * x + m22 * y - q}; }, omega[0].lo,
        omega[0].hi, omega[1].lo, omega[1].hi);
    REQUIRE(brute);
    REQUIRE(*brute == expected);
    const DegreeReport r = degree(affine2(a, b, c, d, p, q), omega);
    REQUIRE(r.degree == expected);
    ++compared;
    inside += in;
  }
  CHECK(compared > 30);
  CHECK(inside > 3);
}

TEST_CASE("piecewise planar map agrees with brute-force winding") {
  const PiecewiseMap m = plane_map();
  for (const Box& omega : {Box{{-1.0, 1.0}, {-1.0, 1.0}}, Box{{-0.5, 0.9}, {-0.7, 0.6}}, Box{{0.3, 1.0}, {-1.0, 1.0}},
                           Box{{-1.0, -0.2}, {-1.0, 1.0}}}) {
    const auto brute = oracle::winding_brute(plane_g, omega[0].lo, omega[0].hi, omega[1].lo, omega[1].hi);
    REQUIRE(brute);
    CHECK(boundary_degree(m, omega) == *brute);
  }
}

TEST_CASE("normalization and a constant outside the box") {
  const DegreeReport r = degree(minus_identity(), Box{{-1.0, 1.0}, {-1.0, 1.0}});
  CHECK(r.degree == 1);
  CHECK(r.well_defined);
  CHECK(r.to_csv().rfind("x,enclosure,distance\n", 0) == 0);
  const PiecewiseMap far = PiecewiseMap::continuous(Box{{-1.0, 1.0}, {-1.0, 1.0}}, {Expr(5.0), Expr(5.0)});
  CHECK(degree(far, far.domain()).degree == 0);
  const PiecewiseMap inside = PiecewiseMap::continuous(Box{{-1.0, 1.0}}, {Expr(0.25)});
  CHECK(degree(inside, inside.domain()).degree == 1);
}

TEST_CASE("a zero on the boundary is reported as not well-defined") {
  const PiecewiseMap c = PiecewiseMap::continuous(Box{{0.0, 1.0}}, {Expr(0.5)});
  try {
    degree(c, Box{{0.5, 1.0}});
    FAIL("expected not_well_defined");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_well_defined);
  }
  // a jump straddling 0 at the boundary point
  const PiecewiseMap t = step_map({0.0, 1.0}, {0.5}, {0.25, 1.0});
  CHECK_THROWS_AS(degree(t, Box{{0.5, 1.0}}), Error);
}

TEST_CASE("condition failure leaves only the boundary degree") {
  const Expr x = Expr::var(0);
  const PiecewiseMap r(Box{{-1.0, 1.0}}, 1,
                       {Piece{Region({{x, false}}), {Expr(0.5)}}, Piece{Region({{-x, true}}), {Expr(-0.5)}}});
  const DegreeReport d = degree(r, Box{{-1.0, 1.0}});
  CHECK(d.boundary_degree == 1);
  CHECK_FALSE(d.degree);
  CHECK_FALSE(d.well_defined);
  REQUIRE(d.condition);
  REQUIRE(d.condition->violations.size() == 1);
  CHECK(d.condition->violations[0].x[0] == 0.0);
}

TEST_CASE("sample budget exhaustion is an error") {
  DegreeOptions o;
  o.refinement = 1;
  o.max_samples = 0;
  try {
    degree(minus_identity(), Box{{-1.0, 1.0}, {-1.0, 1.0}}, o);
    FAIL("expected refinement_exhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::refinement_exhausted);
  }
}

TEST_CASE("zero-free certification") {
  const PiecewiseMap m = minus_identity();
  CHECK(certify_zero_free(m, Box{{0.2, 0.8}, {-0.5, 0.5}}));
  CHECK_FALSE(certify_zero_free(m, Box{{-0.1, 0.1}, {-0.1, 0.1}}));
  const PiecewiseMap t = step_map({0.0, 1.0}, {0.5}, {0.25, 1.0});
  CHECK(certify_zero_free(t, Box{{0.6, 0.9}}));
  CHECK_FALSE(certify_zero_free(t, Box{{0.4, 0.6}}));
}

TEST_CASE("additivity over random cuts") {
  oracle::Rng rng(33);
  int passed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto o = oracle::random_steps(rng, 6);
    const double a = rng.uniform(-2, -0.5), b = rng.uniform(0.5, 2), c = rng.uniform(-0.4, 0.4);
    if (!oracle::sign_scan_degree(o, a, b) || !oracle::sign_scan_degree(o, a, c) || !oracle::sign_scan_degree(o, c, b))
      continue;
    const PropertyReport r = verify_additivity(o.to_map(), Box{{a, b}}, Box{{a, c}}, Box{{c, b}});
    REQUIRE(r.status == CheckStatus::pass);
    REQUIRE(r.degrees[0].second == *oracle::sign_scan_degree(o, a, b));
    ++passed;
  }
  CHECK(passed > 60);
  const PiecewiseMap id = PiecewiseMap::continuous(Box{{-1.0, 1.0}}, {Expr(0.0)});
  CHECK(verify_additivity(id, Box{{-1.0, 1.0}}, Box{{-1.0, 0.0}}, Box{{0.0, 1.0}}).status == CheckStatus::inapplicable);
  CHECK(verify_additivity(id, Box{{-1.0, 1.0}}, Box{{-1.0, 0.5}}, Box{{0.0, 1.0}}).status == CheckStatus::inapplicable);
}

TEST_CASE("box complement tiles omega minus the block") {
  const Box omega{{0.0, 4.0}, {0.0, 3.0}}, a{{1.0, 2.0}, {1.0, 2.5}};
  const auto parts = box_complement(omega, a);
  CHECK(parts.size() == 8);
  double area = 0.0;
  for (const auto& p : parts) area += p[0].width() * p[1].width();
  CHECK(area == Catch::Approx(12.0 - 1.5));
  CHECK(box_complement(Box{{0.0, 1.0}}, Box{{0.2, 0.4}}).size() == 2);
}

TEST_CASE("excision in one and two dimensions") {
  const PiecewiseMap m = minus_identity();
  const PropertyReport r = verify_excision(m, m.domain(), Box{{0.3, 0.6}, {0.2, 0.7}});
  CHECK(r.status == CheckStatus::pass);
  CHECK(verify_excision(m, m.domain(), std::nullopt).status == CheckStatus::pass);
  // excising the zero itself is refused
  CHECK(verify_excision(m, m.domain(), Box{{-0.1, 0.1}, {-0.1, 0.1}}).status == CheckStatus::inapplicable);
  const PiecewiseMap t = step_map({-2.0, 2.0}, {1.0 / 3.0, 2.0 / 3.0}, {1.0 / 3.0, 2.0 / 3.0, 1.0});
  CHECK(verify_excision(t, Box{{0.0, 1.2}}, Box{{0.4, 0.5}}).status == CheckStatus::pass);
}

TEST_CASE("odd maps have odd degree") {
  CHECK(verify_borsuk(minus_identity(), Box{{-1.0, 1.0}, {-1.0, 1.0}}).status == CheckStatus::pass);
  CHECK(verify_borsuk(minus_identity(), Box{{-1.0, 0.5}, {-1.0, 1.0}}).status == CheckStatus::inapplicable);
  const PiecewiseMap shifted = PiecewiseMap::continuous(Box{{-1.0, 1.0}, {-1.0, 1.0}}, {e2("0.1 - x"), e2("-y")});
  CHECK(verify_borsuk(shifted, shifted.domain()).status == CheckStatus::inapplicable);
}

TEST_CASE("degree depends only on boundary values") {
  const PiecewiseMap t = minus_identity();
  const PiecewiseMap s(t.domain(), 2,
                       {Piece{Region({{e2("x^2 + y^2 - 1/4"), true}}), {e2("x + 0.3"), e2("y*y")}},
                        Piece{Region::everywhere(), {e2("-x"), e2("-y")}}});
  CHECK(verify_boundary_dependence(t, s, t.domain()).status == CheckStatus::pass);
  const PiecewiseMap u = PiecewiseMap::continuous(t.domain(), {e2("x/2"), e2("y/2")});
  CHECK(verify_boundary_dependence(t, u, t.domain()).status == CheckStatus::inapplicable);
}

TEST_CASE("homotopy t T between the zero map and the step map") {
  const std::vector<std::string> n{"x", "t"};
  auto e = [&](const char* s) { return parse_expr(s, n); };
  const HomotopyFamily h(PiecewiseMap(Box{{-3.0, 3.0}, {0.0, 1.0}}, 1,
                                      {Piece{Region({{e("x - 1/3"), false}}), {e("t/3")}},
                                       Piece{Region({{e("x - 2/3"), false}}), {e("2*t/3")}},
                                       Piece{Region::everywhere(), {e("t")}}}));
  const HomotopyReport r = homotopy_degree_bridge(h, Box{{-2.0, 2.0}});
  CHECK(r.status == CheckStatus::pass);
  CHECK(r.degree_t0 == 1);
  CHECK(r.degree_t1 == 1);
  CHECK(std::find(r.unstable_t.begin(), r.unstable_t.end(), 0.5) != r.unstable_t.end());
  CHECK(r.certified_points > 0);
  CHECK_THROWS_AS(HomotopyFamily(step_map({0.0, 1.0}, {0.5}, {0.0, 1.0})), Error);
}
