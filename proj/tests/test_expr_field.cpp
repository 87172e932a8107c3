#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "unilab/errors.hpp"
#include "unilab/expr.hpp"
#include "unilab/field.hpp"

using namespace unilab;

namespace {

// Second evaluator, walking the tree on its own.
double walk(const ScalarExpr& e, const Vec3& x) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case ExprKind::Number:
    case ExprKind::Constant: return n.value;
    case ExprKind::Variable: return x[n.axis];
    case ExprKind::Neg: return -walk(n.lhs, x);
    case ExprKind::Add: return walk(n.lhs, x) + walk(n.rhs, x);
    case ExprKind::Sub: return walk(n.lhs, x) - walk(n.rhs, x);
    case ExprKind::Mul: return walk(n.lhs, x) * walk(n.rhs, x);
    case ExprKind::Div: return walk(n.lhs, x) / walk(n.rhs, x);
    case ExprKind::Pow: return std::pow(walk(n.lhs, x), walk(n.rhs, x));
    case ExprKind::Call: {
      const double a = walk(n.lhs, x);
      switch (n.func) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Tan: return std::tan(a);
        case Func::Exp: return std::exp(a);
        case Func::Log: return std::log(a);
        case Func::Sqrt: return std::sqrt(a);
      }
    }
  }
  return NAN;
}

std::string random_polynomial(std::mt19937& rng) {
  std::string s = testing::coef(testing::uniform(rng, -2, 2));
  for (int t = 0; t < 5; ++t) {
    s += " + " + testing::coef(testing::uniform(rng, -2, 2));
    const int terms = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int f = 0; f < terms; ++f) s += "*x" + std::to_string(std::uniform_int_distribution<int>(1, 3)(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("parse: grammar shapes") {
  const ScalarExpr a = parse("x1 + 2*x2");
  REQUIRE(a.kind() == ExprKind::Add);
  CHECK(a.node().lhs.kind() == ExprKind::Variable);
  CHECK(a.node().lhs.node().axis == 0);
  const ExprNode& mul = a.node().rhs.node();
  REQUIRE(mul.kind == ExprKind::Mul);
  CHECK(mul.lhs.kind() == ExprKind::Number);
  CHECK(mul.lhs.node().value == 2.0);
  CHECK(mul.rhs.node().axis == 1);

  const ScalarExpr p = parse("sin(x3)^2");
  REQUIRE(p.kind() == ExprKind::Pow);
  CHECK(p.node().lhs.kind() == ExprKind::Call);
  CHECK(p.node().lhs.node().func == Func::Sin);
  CHECK(p.node().lhs.node().lhs.node().axis == 2);
  CHECK(p.node().rhs.node().value == 2.0);
}

TEST_CASE("parse: precedence and associativity") {
  const Vec3 x{2, 3, 0.5};
  CHECK(eval(parse("2^3^2"), x) == doctest::Approx(512.0));
  CHECK(eval(parse("-x1^2"), x) == doctest::Approx(-4.0));
  CHECK(eval(parse("x2 - x1 - 1"), x) == doctest::Approx(0.0));
  CHECK(eval(parse("x2 / x1 / 2"), x) == doctest::Approx(0.75));
}

TEST_CASE("parse: errors carry byte offsets") {
  try {
    parse("x1 + * 2");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 5);
  }
  try {
    parse("x1 + foo(x2)");
    FAIL("expected UnknownIdentifier");
  } catch (const UnknownIdentifier& e) {
    CHECK(e.offset() == 5);
  }
  CHECK_THROWS_AS(parse("(x1"), SyntaxError);
  CHECK_THROWS_AS(parse(""), SyntaxError);
}

TEST_CASE("eval") {
  CHECK(eval(parse("x1*x2"), {2, 3, 7}) == 6.0);
  CHECK(std::abs(eval(parse("sin(pi/2)"), {0.1, 0.2, 0.3}) - 1.0) < 1e-15);
  CHECK_THROWS_AS(eval(parse("log(x1)"), {-1, 0, 0}), DomainError);
  CHECK_THROWS_AS(eval(parse("sqrt(x1)"), {-1, 0, 0}), DomainError);
}

TEST_CASE("eval agrees with an independent tree walk") {
  std::mt19937 rng(21);
  for (int n = 0; n < 100; ++n) {
    const ScalarExpr e = parse(random_polynomial(rng));
    const Vec3 x = testing::random_point(rng);
    CHECK(std::abs(eval(e, x) - walk(e, x)) < 1e-12);
  }
}

TEST_CASE("to_string round-trips") {
  std::mt19937 rng(22);
  for (int n = 0; n < 30; ++n) {
    const auto strings = testing::random_frame_strings(rng);
    const ScalarExpr e = parse(strings[static_cast<std::size_t>(n % 9)]);
    const ScalarExpr back = parse(to_string(e));
    const Vec3 x = testing::random_point(rng);
    CHECK(std::abs(eval(e, x) - eval(back, x)) < 1e-12);
  }
}

TEST_CASE("diff: textbook cases") {
  std::mt19937 rng(23);
  const ScalarExpr d = diff(parse("x1^2"), 0);
  for (int n = 0; n < 10; ++n) {
    const Vec3 x = testing::random_point(rng);
    CHECK(eval(d, x) == doctest::Approx(2 * x[0]).epsilon(1e-14));
  }
  const ScalarExpr c = diff(parse("sin(x2)"), 1);
  CHECK(to_string(c) == to_string(parse("cos(x2)")));
  CHECK(diff(parse("x1*x3"), 1).is_constant());
}

TEST_CASE("diff matches central differences") {
  std::mt19937 rng(24);
  const double h = 1e-5;
  for (int n = 0; n < 60; ++n) {
    const auto strings = testing::random_frame_strings(rng);
    const ScalarExpr e = parse(strings[static_cast<std::size_t>(n % 9)] + " + " + random_polynomial(rng));
    const Vec3 x = testing::random_point(rng, -0.9, 0.9);
    for (std::size_t k = 0; k < 3; ++k) {
      Vec3 xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fd = (eval(e, xp) - eval(e, xm)) / (2 * h);
      const double exact = eval(diff(e, k), x);
      CHECK(std::abs(exact - fd) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("diff is linear") {
  std::mt19937 rng(25);
  const ScalarExpr e1 = parse(random_polynomial(rng) + " + sin(x1*x2)");
  const ScalarExpr e2 = parse(random_polynomial(rng) + " + exp(x3)");
  const double a = 1.7, b = -0.4;
  const ScalarExpr lin = number(a) * e1 + number(b) * e2;
  for (std::size_t k = 0; k < 3; ++k)
    for (int n = 0; n < 100; ++n) {
      const Vec3 x = testing::random_point(rng);
      const double lhs = eval(diff(lin, k), x);
      const double rhs = a * eval(diff(e1, k), x) + b * eval(diff(e2, k), x);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("frame_jet: constant and linear entries") {
  const FrameField id = FrameField::constant(Mat3::identity());
  const FrameJet j = frame_jet(id, {0.2, 0.1, 0.4});
  CHECK(j.p == Mat3::identity());
  CHECK(j.dp == Ten3{});

  const FrameField lin = FrameField::analytic({"1", "0", "0", "0", "1", "x3", "0", "0", "1"});
  const FrameJet k = frame_jet(lin, {0.3, -0.2, 0.5});
  // entry (1,2) in one-based naming is row 0, column 1
  const FrameField e12 = FrameField::analytic({"1", "x3", "0", "0", "1", "0", "0", "0", "1"});
  const FrameJet m = frame_jet(e12, {0.3, -0.2, 0.5});
  Ten3 expected;
  expected(0, 1, 2) = 1.0;
  CHECK(m.dp == expected);
  CHECK(m.p(0, 1) == 0.5);
  CHECK(k.dp(1, 2, 2) == 1.0);
}

TEST_CASE("frame_jet: singular frame throws") {
  const FrameField f = FrameField::analytic({"x1", "0", "0", "0", "1", "0", "0", "0", "1"});
  CHECK_THROWS_AS(frame_jet(f, {0, 0.3, 0.3}), SingularFrame);
}

TEST_CASE("sampled frame: interior derivatives close to analytic on 41^3") {
  std::mt19937 rng(26);
  const FrameField f = FrameField::analytic(
      {"2 + sin(x1)", "0.3*x2*x3", "0", "0.1*cos(x3)", "2", "0.2*exp(x1)", "0", "0.1*x1^2", "2 + 0.2*sin(x2)"});
  const FrameField g = f.sampled_on({-1, -1, -1}, {1, 1, 1}, {41, 41, 41});
  double worst = 0.0, scale = 0.0;
  for (int n = 0; n < 200; ++n) {
    const Vec3 x = testing::random_point(rng, -0.9, 0.9);
    const FrameJet a = f.jet(x), b = g.jet(x);
    worst = std::max(worst, max_abs_diff(a.dp, b.dp));
    scale = std::max(scale, max_abs(a.dp));
  }
  CHECK(worst < 1e-3 * scale);
  CHECK_THROWS_AS(g.value({1.5, 0, 0}), OutOfDomain);
}

TEST_CASE("sampled frame: second-order convergence at nodes") {
  const FrameField f = FrameField::analytic(
      {"2 + sin(x1)", "0.3*x2*x3", "0", "0.1*cos(x3)", "2", "0.2*exp(x1)", "0", "0.1*x1^2", "2 + 0.2*sin(x2)"});
  // Evaluate at a point that is a node for both grids.
  const Vec3 x{0.25, -0.5, 0.25};
  const Ten3 exact = f.jet(x).dp;
  const double e1 = max_abs_diff(f.sampled_on({-1, -1, -1}, {1, 1, 1}, {9, 9, 9}).jet(x).dp, exact);
  const double e2 = max_abs_diff(f.sampled_on({-1, -1, -1}, {1, 1, 1}, {17, 17, 17}).jet(x).dp, exact);
  const double order = std::log2(e1 / e2);
  CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("grid field: trilinear interpolation reproduces linear data") {
  const GridField g = GridField::sample({0, 0, 0}, {1, 2, 3}, {3, 4, 5}, 1, [](const Vec3& x) {
    return std::vector<double>{1 + 2 * x[0] - x[1] + 0.5 * x[2]};
  });
  std::vector<double> v;
  std::vector<std::array<double, 3>> grad;
  g.evaluate({0.3, 1.7, 2.2}, v, grad);
  CHECK(v[0] == doctest::Approx(1 + 0.6 - 1.7 + 1.1));
  CHECK(grad[0][0] == doctest::Approx(2.0));
  CHECK(grad[0][1] == doctest::Approx(-1.0));
  CHECK(grad[0][2] == doctest::Approx(0.5));
}

TEST_CASE("domain lattice") {
  BodyDomain d{{0, 0, 0}, {1, 1, 1}, {2, 3, 4}};
  CHECK(d.node_count() == 24);
  CHECK(d.node(0) == Vec3{0, 0, 0});
  CHECK(d.node(1) == Vec3{1, 0, 0});
  CHECK(d.node(23) == Vec3{1, 1, 1});
  BodyDomain bad{{0, 0, 0}, {0, 1, 1}, {2, 2, 2}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
