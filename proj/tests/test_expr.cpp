#include <doctest.h>

#include <random>
#include <string>
#include <thread>

#include "oracles.hpp"
#include "planefield/expr.hpp"

using namespace planefield;

namespace {

const CoordNames kPolar{"r", "phi", "t"};
const CoordNames kXYZ{"x", "y", "z"};

// Random expressions that stay inside every function's domain on [-1, 1]^3.
struct ExprGen {
  std::mt19937_64 rng;

  explicit ExprGen(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  std::string leaf() {
    if (pick(3) == 0) return format_number(std::round(uniform(0.5, 2.0) * 100) / 100);
    return std::string(kXYZ[pick(3)]);
  }

  std::string gen(int depth) {
    if (depth == 0) return leaf();
    const std::string a = gen(depth - 1);
    switch (pick(11)) {
      case 0: return "(" + a + " + " + gen(depth - 1) + ")";
      case 1: return "(" + a + " - " + gen(depth - 1) + ")";
      case 2: return a + "*" + gen(depth - 1);
      case 3: return "(" + a + ")/(2 + sin(" + gen(depth - 1) + "))";
      case 4: return "(" + a + ")^" + std::to_string(1 + pick(3));
      case 5: return "sin(" + a + ")";
      case 6: return "cos(" + a + ")";
      case 7: return "exp(sin(" + a + "))";
      case 8: return "sqrt(1 + (" + a + ")^2)";
      case 9: return "smoothstep(-0.5, 0.7, sin(" + a + "))";
      default: return "-" + a;
    }
  }
};

}  // namespace

TEST_CASE("parse builds the expected node shapes") {
  const Expr sq = Expr::parse("r^2", kPolar);
  CHECK(sq.root().kind == NodeKind::Pow);
  REQUIRE(sq.root().children.size() == 2);
  CHECK(sq.root().children[0]->kind == NodeKind::Coord);
  CHECK(sq.root().children[0]->coord == 0);

  const Expr step = Expr::parse("smoothstep(1/3, 2/3, r)", kPolar);
  CHECK(step.root().kind == NodeKind::Call);
  CHECK(step.root().function == Function::Smoothstep);
  CHECK(step.root().children.size() == 3);
  CHECK(step.root().children[0]->kind == NodeKind::Number);
  CHECK(step.root().children[0]->number == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
}

TEST_CASE("syntax errors carry a position and the expected tokens") {
  try {
    (void)Expr::parse("sin(", kPolar);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 4);
    CHECK_FALSE(e.expected().empty());
  }
  CHECK_THROWS_AS((void)Expr::parse("r +* t", kPolar), SyntaxError);
  CHECK_THROWS_AS((void)Expr::parse("(r", kPolar), SyntaxError);
  CHECK_THROWS_AS((void)Expr::parse("r $ 2", kPolar), SyntaxError);
  CHECK_THROWS_AS((void)Expr::parse("r t", kPolar), SyntaxError);

  try {
    (void)Expr::parse("r + theta", kPolar);
    FAIL("expected UnknownIdentifier");
  } catch (const UnknownIdentifier& e) {
    CHECK(e.name() == "theta");
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS((void)Expr::parse("tan(r)", kPolar), UnknownIdentifier);
  CHECK_THROWS_AS((void)Expr::parse("sin(r, t)", kPolar), ArityError);
  CHECK_THROWS_AS((void)Expr::parse("smoothstep(0, 1)", kPolar), ArityError);
}

TEST_CASE("precedence: ^ over unary minus over * / over + -") {
  const Point p{3.0, 0.0, 0.0};
  CHECK(Expr::parse("-x^2", kXYZ).eval(p) == -9.0);
  CHECK(Expr::parse("(-x)^2", kXYZ).eval(p) == 9.0);
  CHECK(Expr::parse("2^3^2", kXYZ).eval(p) == 512.0);
  CHECK(Expr::parse("2^-1", kXYZ).eval(p) == 0.5);
  CHECK(Expr::parse("8/2/2", kXYZ).eval(p) == 2.0);
  CHECK(Expr::parse("2-3-4", kXYZ).eval(p) == -5.0);
  CHECK(Expr::parse("1 + 2*x", kXYZ).eval(p) == 7.0);
  CHECK(Expr::parse("-x*2", kXYZ).eval(p) == -6.0);
  CHECK(Expr::parse("1.5e1 + .5", kXYZ).eval(p) == 15.5);
  CHECK(Expr::parse("2*pi", kXYZ).eval(p) == doctest::Approx(6.283185307179586));
}

TEST_CASE("eval_jet gives exact partials") {
  const Jet1 a = Expr::parse("r^2", kPolar).eval_jet({2.0, 0.0, 0.0});
  CHECK(a.value == 4.0);
  CHECK(a.grad == std::array<double, 3>{4.0, 0.0, 0.0});

  const Jet1 b = Expr::parse("sin(phi)", kPolar).eval_jet({0.0, 0.0, 0.0});
  CHECK(b.value == 0.0);
  CHECK(b.grad == std::array<double, 3>{0.0, 1.0, 0.0});

  const Jet1 c = Expr::parse("x*y*z + x/y", kXYZ).eval_jet({1.0, 2.0, 3.0});
  CHECK(c.value == doctest::Approx(6.5));
  CHECK(c.d(0) == doctest::Approx(6.5));
  CHECK(c.d(1) == doctest::Approx(3.0 - 0.25));
  CHECK(c.d(2) == doctest::Approx(2.0));

  const Jet1 d = Expr::parse("x^y", kXYZ).eval_jet({2.0, 3.0, 0.0});
  CHECK(d.value == doctest::Approx(8.0));
  CHECK(d.d(0) == doctest::Approx(12.0));
  CHECK(d.d(1) == doctest::Approx(8.0 * std::log(2.0)));
}

TEST_CASE("smoothstep gradient matches central differences") {
  const Expr e = Expr::parse("smoothstep(1/3, 2/3, r)", kPolar);
  const Point p{0.5, 0.0, 0.0};
  const Jet1 j = e.eval_jet(p);
  CHECK(j.value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(j.d(0) > 0.0);
  const double fd = oracle::central_difference([&](const Point& q) { return e.eval(q); }, p, 0, 1e-6);
  CHECK(std::fabs(j.d(0) - fd) <= 1e-8);
  // At the midpoint ds/dw = 2 by symmetry of sigma'(1/2) = 4 sigma(1/2), so ds/dr = 6.
  CHECK(j.d(0) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("smoothstep plateaus, midpoint and domain") {
  CHECK(smoothstep(1.0 / 3, 2.0 / 3, 0.2) == 0.0);
  CHECK(smoothstep(1.0 / 3, 2.0 / 3, 0.9) == 1.0);
  CHECK(smoothstep(1.0 / 3, 2.0 / 3, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(smoothstep(1.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(smoothstep(2.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS((void)Expr::parse("smoothstep(r, 0.5, t)", kPolar).eval({0.7, 0, 0.1}), DomainError);

  // strictly increasing inside (away from w ~ 1, where 1 - s underflows)
  double prev = 0.0;
  for (int i = 1; i < 90; ++i) {
    const double s = smoothstep(0.0, 1.0, i / 100.0);
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("smoothstep slope helpers agree with differences of the value") {
  for (double x : {0.30, 0.41, 0.5, 0.63, 0.66}) {
    const double fd = (smoothstep(1.0 / 3, 2.0 / 3, x + 1e-6) - smoothstep(1.0 / 3, 2.0 / 3, x - 1e-6)) / 2e-6;
    CHECK(smoothstep_slope(1.0 / 3, 2.0 / 3, x) == doctest::Approx(fd).epsilon(1e-7));
    const Jet1 s = smoothstep_slope(1.0 / 3, 2.0 / 3, Jet1::variable(x, 0));
    const double fd2 = (smoothstep_slope(1.0 / 3, 2.0 / 3, x + 1e-6) -
                        smoothstep_slope(1.0 / 3, 2.0 / 3, x - 1e-6)) / 2e-6;
    CHECK(s.d(0) == doctest::Approx(fd2).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("smoothstep and its partials are continuous at the breakpoints") {
  const Expr e = Expr::parse("smoothstep(0.25, 0.75, x)", kXYZ);
  for (double edge : {0.25, 0.75}) {
    const Jet1 l = e.eval_jet({edge - 1e-9, 0, 0});
    const Jet1 r = e.eval_jet({edge + 1e-9, 0, 0});
    CHECK(std::fabs(l.value - r.value) < 1e-12);
    for (int k = 0; k < 3; ++k) CHECK(std::fabs(l.d(k) - r.d(k)) < 1e-12);
  }
}

TEST_CASE("domain errors name the function") {
  try {
    (void)Expr::parse("sqrt(x)", kXYZ).eval({-1.0, 0, 0});
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.function() == "sqrt");
    CHECK(e.argument() == -1.0);
  }
  CHECK_THROWS_AS((void)Expr::parse("x^0.5", kXYZ).eval({-1.0, 0, 0}), DomainError);
  CHECK_THROWS_AS((void)Expr::parse("x^y", kXYZ).eval({0.0, 1.0, 0}), DomainError);
  CHECK_THROWS_AS((void)Expr::parse("1/x", kXYZ).eval({0.0, 0, 0}), DomainError);
  CHECK_THROWS_AS((void)Expr::parse("x^-1", kXYZ).eval_jet({0.0, 0, 0}), DomainError);
  CHECK_THROWS_AS((void)Expr::parse("sqrt(x)", kXYZ).eval_jet({0.0, 0, 0}), DomainError);
  // integer powers accept negative bases
  CHECK(Expr::parse("x^3", kXYZ).eval({-2.0, 0, 0}) == -8.0);
  // sqrt at a stationary zero is fine
  CHECK(Expr::parse("sqrt(x^2 - x^2)", kXYZ).eval_jet({1.0, 0, 0}).value == 0.0);
}

TEST_CASE("constant folding and printing") {
  const Expr e = Expr::parse("1/3 + r", kPolar);
  CHECK(e.root().kind == NodeKind::Add);
  CHECK(e.root().children[0]->kind == NodeKind::Number);
  CHECK(e.print() == "0.3333333333333333 + r");
  CHECK(Expr::parse("-(r + t)^2", kPolar).print() == "-(r + t)^2");
  CHECK(Expr::parse("(-r)^2", kPolar).print() == "(-r)^2");
  CHECK(Expr::parse("(-1)^2*r", kPolar).print() == "1*r");
  CHECK(Expr::parse("r - (t - phi)", kPolar).print() == "r - (t - phi)");
  CHECK(Expr::parse("r / (t*phi)", kPolar).print() == "r/(t*phi)");
  CHECK(Expr::parse("(r^t)^phi", kPolar).print() == "(r^t)^phi");
  CHECK(Expr::parse("2 * pi", kPolar).print() == "2*pi");
  CHECK(Expr::parse("2 * pi", kPolar).is_constant());
  CHECK_FALSE(Expr::parse("0*r", kPolar).is_constant());
  CHECK(eval_constant("2*pi") == doctest::Approx(6.283185307179586));
}

TEST_CASE("property: jets match central differences on 1000 random expressions") {
  ExprGen gen(20240611);
  int checked = 0;
  int attempts = 0;
  while (checked < 1000 && attempts < 5000) {
    ++attempts;
    const std::string text = gen.gen(1 + gen.pick(4));
    const Expr e = Expr::parse(text, kXYZ);
    const Point p{gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1)};
    Jet1 j;
    try {
      j = e.eval_jet(p);
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(j.value) || std::fabs(j.value) > 1e6) continue;
    ++checked;
    const auto f = [&](const Point& q) { return e.eval(q); };
    for (int k = 0; k < 3; ++k) {
      const double fd = oracle::central_difference(f, p, k, 1e-6);
      const double scale = std::fmax(1.0, std::fmax(std::fabs(j.value), std::fabs(j.d(k))));
      INFO(text << " at axis " << k);
      CHECK(std::fabs(fd - j.d(k)) <= 1e-6 * scale);
    }
  }
  CHECK(checked == 1000);
}

TEST_CASE("property: parse . print . parse is a fixed point") {
  ExprGen gen(77);
  for (int i = 0; i < 500; ++i) {
    const std::string text = gen.gen(1 + gen.pick(4));
    const std::string once = Expr::parse(text, kXYZ).print();
    const Expr again = Expr::parse(once, kXYZ);
    INFO(text);
    CHECK(again.print() == once);
    const Point p{0.3, -0.2, 0.7};
    CHECK(again.eval(p) == Expr::parse(text, kXYZ).eval(p));
  }
}

TEST_CASE("evaluation is reentrant across threads") {
  const Expr e = Expr::parse("sin(x)*exp(y) + smoothstep(0, 1, z)", kXYZ);
  std::vector<double> out(8);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&, i] {
      double s = 0;
      for (int k = 0; k < 2000; ++k) s += e.eval_jet({0.001 * k, 0.2, 0.5}).d(0);
      out[i] = s;
    });
  for (auto& t : threads) t.join();
  for (double v : out) CHECK(v == out[0]);
}
