#include <catch_amalgamated.hpp>

#include "ccdeg/maps.hpp"
#include "oracles.hpp"

using namespace ccdeg;

namespace {

const std::vector<std::string> kXY{"x", "y"};

double ev(const std::string& text, double x, double y = 0.0) { return parse_expr(text, kXY).eval(Vec{x, y}); }

std::size_t error_column(const std::string& text) {
  try {
    parse_expr(text, kXY);
  } catch (const ParseError& e) {
    return e.column();
  }
  return 0;
}

}  // namespace

TEST_CASE("parser precedence and associativity") {
  CHECK(ev("1 + 2 * 3", 0) == 7.0);
  CHECK(ev("(1 + 2) * 3", 0) == 9.0);
  CHECK(ev("2 ^ 3 ^ 2", 0) == 512.0);
  CHECK(ev("-x^2", 3.0) == -9.0);
  CHECK(ev("2^-1", 0) == 0.5);
  CHECK(ev("8 / 4 / 2", 0) == 1.0);
  CHECK(ev("x - y - 1", 5.0, 2.0) == 2.0);
  CHECK(ev("min(x, y) + max(x, y)", 1.0, 4.0) == 5.0);
  CHECK(ev("abs(-x) + exp(0) + cos(0) + sin(0)", 2.0) == 4.0);
  CHECK(ev("pow(x, 3)", 2.0) == 8.0);
  CHECK(ev("pi", 0) == std::numbers::pi);
  CHECK(ev("1/3", 0) == 1.0 / 3.0);
  CHECK(ev("1e-3 * x", 2.0) == 0.002);
}

TEST_CASE("parser errors carry the column") {
  CHECK(error_column("x +") == 4);
  CHECK(error_column("x + z") == 5);
  CHECK(error_column("(x + 1") == 7);
  CHECK(error_column("x $ 2") == 3);
  CHECK(error_column("sin x") == 5);
  CHECK(error_column("min(x)") == 6);
  CHECK_THROWS_AS(parse_expr("", kXY), ParseError);
}

TEST_CASE("expression enclosures contain sampled values") {
  oracle::Rng rng(5);
  const std::vector<std::string> exprs{"x*x - 2*x*y + sin(3*x)", "exp(x - y) / (2 + cos(y))", "abs(x) * min(x, y)",
                                       "max(x^2, y) - 1/3", "(x + y)^3"};
  for (const auto& text : exprs) {
    const Expr e = parse_expr(text, kXY);
    for (int trial = 0; trial < 50; ++trial) {
      const double x0 = rng.uniform(-2, 2), y0 = rng.uniform(-2, 2);
      const double w = rng.uniform(0, 1);
      const Interval ax{x0, x0 + w}, ay{y0, y0 + 0.5 * w};
      const Interval vars[2] = {ax, ay};
      const Interval enc = e.enclose(vars);
      for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) {
          const double x = ax.lo + ax.width() * i / 10.0, y = ay.lo + ay.width() * j / 10.0;
          REQUIRE(enc.contains(e.eval(Vec{x, y}), 1e-12));
        }
    }
  }
}

TEST_CASE("bind substitutes and shifts later variables") {
  const Expr e = parse_expr("x + 10*y", kXY);
  CHECK(e.bind(0, 2.0).eval(Vec{3.0}) == 32.0);
  CHECK(e.bind(1, 2.0).eval(Vec{3.0}) == 23.0);
  CHECK(e.arity() == 2);
}

TEST_CASE("regions: strict, closure, ownership order") {
  const PiecewiseMap t = step_map({0.0, 1.0}, {1.0 / 3.0, 2.0 / 3.0}, {1.0 / 3.0, 2.0 / 3.0, 1.0});
  CHECK(t.evaluate(Vec{1.0 / 3.0})[0] == 1.0 / 3.0);
  CHECK(t.evaluate(Vec{0.34})[0] == 2.0 / 3.0);
  CHECK(t.evaluate(Vec{2.0 / 3.0})[0] == 2.0 / 3.0);
  CHECK(t.evaluate(Vec{1.0})[0] == 1.0);
  CHECK(t.adjacent_values(Vec{1.0 / 3.0}).values.size() == 2);
  CHECK(t.adjacent_values(Vec{0.5}).singleton());
  CHECK_THROWS_AS(t.evaluate(Vec{1.5}), Error);
}

TEST_CASE("oracle step maps agree with their library form") {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto o = oracle::random_steps(rng, 6);
    const PiecewiseMap m = o.to_map();
    for (int k = 0; k <= 400; ++k) {
      const double x = -2.0 + k / 100.0;
      REQUIRE(m.evaluate(Vec{x})[0] == Catch::Approx(o.value(x)).margin(1e-15));
    }
    for (double b : o.breaks) REQUIRE(m.evaluate(Vec{b})[0] == Catch::Approx(o.value(b)).margin(1e-15));
  }
}

TEST_CASE("cover gaps and closure defects are found") {
  const Expr x = Expr::var(0);
  const PiecewiseMap gap(Box{{0.0, 1.0}}, 1,
                         {Piece{Region({{x - Expr(0.5), true}}), {Expr(0.0)}},
                          Piece{Region({{Expr(0.5) - x, true}}), {Expr(1.0)}}});
  const auto g = find_cover_gap(gap, 10);
  REQUIRE(g);
  CHECK((*g)[0] == 0.5);

  const PiecewiseMap blowup(Box{{0.0, 1.0}}, 1,
                            {Piece{Region({{-x, true}}), {Expr(1.0) / x}}, Piece{Region::everywhere(), {Expr(0.0)}}});
  CHECK(find_closure_defect(blowup, 10));
  CHECK_FALSE(find_cover_gap(blowup, 10));
}

TEST_CASE("interface points land exactly on representable breaks") {
  const PiecewiseMap t = step_map({-2.0, 2.0}, {1.0 / 3.0, 2.0 / 3.0}, {0.0, 1.0, 2.0});
  const auto pts = t.interface_points(Box{{-2.0, 2.0}}, 1000);
  bool third = false, two_thirds = false;
  for (const auto& p : pts) {
    third |= p[0] == 1.0 / 3.0;
    two_thirds |= p[0] == 2.0 / 3.0;
  }
  CHECK(third);
  CHECK(two_thirds);
}

TEST_CASE("interface points of a planar map lie on the curve") {
  const std::vector<std::string> names{"x", "y"};
  const Expr circle = parse_expr("x^2 + y^2 - 1/2", names);
  const PiecewiseMap m(Box{{-1.0, 1.0}, {-1.0, 1.0}}, 2,
                       {Piece{Region({{circle, true}}), {Expr(0.0), Expr(0.0)}},
                        Piece{Region::everywhere(), {Expr(1.0), Expr(1.0)}}});
  const auto pts = m.interface_points(m.domain(), 20);
  REQUIRE(pts.size() > 20);
  for (const auto& p : pts) CHECK(std::abs(p[0] * p[0] + p[1] * p[1] - 0.5) < 1e-12);
}

TEST_CASE("enclose covers every piece value on the box") {
  const std::vector<std::string> names{"x"};
  const PiecewiseMap m(Box{{-1.0, 1.0}}, 1,
                       {Piece{Region({{parse_expr("x", names), false}}), {parse_expr("x^2", names)}},
                        Piece{Region::everywhere(), {parse_expr("3 - x", names)}}});
  const Box e = m.enclose(Box{{-0.5, 0.5}});
  for (int k = 0; k <= 100; ++k) CHECK(e[0].contains(m.evaluate(Vec{-0.5 + k / 100.0})[0]));
  const Box right = m.enclose(Box{{0.5, 1.0}});
  CHECK(right[0].lo >= 2.0 - 1e-12);
}

TEST_CASE("scaled and bound maps") {
  const std::vector<std::string> names{"x", "t"};
  const PiecewiseMap h(Box{{-1.0, 1.0}, {0.0, 1.0}}, 1,
                       {Piece{Region({{parse_expr("x", names), false}}), {parse_expr("t", names)}},
                        Piece{Region::everywhere(), {parse_expr("-t", names)}}});
  const PiecewiseMap s = h.bind(1, 0.25);
  CHECK(s.input_dim() == 1);
  CHECK(s.evaluate(Vec{-0.5})[0] == 0.25);
  CHECK(s.evaluate(Vec{0.5})[0] == -0.25);
  CHECK(s.scaled(4.0).evaluate(Vec{0.5})[0] == -1.0);
}

TEST_CASE("a later piece masked by an earlier one is not adjacent") {
  const std::vector<std::string> n{"x", "y"};
  auto e = [&](const char* s) { return parse_expr(s, n); };
  // the block x > 1/2, y > 0 takes precedence over y >= 0, and `everywhere` only fills y < 0
  const PiecewiseMap m(Box{{-1.0, 1.0}, {-1.0, 1.0}}, 1,
                       {Piece{Region({{e("1/2 - x"), true}, {e("-y"), true}}), {Expr(1.0)}},
                        Piece{Region({{e("-y"), false}}), {Expr(2.0)}},
                        Piece{Region::everywhere(), {Expr(3.0)}}});
  CHECK(m.adjacent_values(Vec{-0.3, 0.4}).singleton());
  CHECK(m.adjacent_values(Vec{0.75, 0.5}).singleton());
  CHECK(m.adjacent_values(Vec{0.5, 0.5}).values.size() == 2);
  CHECK(m.adjacent_values(Vec{0.0, 0.0}).values.size() == 2);
  CHECK(m.adjacent_values(Vec{0.75, 0.0}).values.size() == 3);
  CHECK(m.adjacent_values(Vec{0.5, 0.0}).values.size() == 3);
}

TEST_CASE("a line region is adjacent along its own direction") {
  const std::vector<std::string> n{"t", "x"};
  auto e = [&](const char* s) { return parse_expr(s, n); };
  const PiecewiseMap f(Box{{0.0, 2.0}, {-1.0, 1.0}}, 1,
                       {Piece{Region({{e("x"), true}}), {Expr(1.0)}}, Piece{Region({{e("-x"), true}}), {Expr(-1.0)}},
                        Piece{Region::everywhere(), {Expr(0.0)}}});
  CHECK(f.adjacent_values(Vec{1.0, 0.0}).values.size() == 3);
  CHECK(f.adjacent_values(Vec{1.0, 0.5}).singleton());
}
