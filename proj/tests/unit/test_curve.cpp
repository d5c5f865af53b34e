#include "curve.hpp"
#include "doctest.h"
#include "oracle.hpp"
#include "rng.hpp"

using namespace trivar;

TEST_CASE("named curves evaluate as advertised") {
  auto parab = named_curve("parabola");
  auto p = parab.eval(Rational(3));
  CHECK(p[0] == 3);
  CHECK(p[1] == 9);
  CHECK(!parab.has_denominators());

  auto axis = named_curve("x-axis");
  CHECK(axis.is_x_axis());
  CHECK(axis.eval(Rational(7))[1].is_zero());

  auto cubic = named_curve("cubic");
  CHECK(cubic.eval(Rational(2))[1] == 8);
}

TEST_CASE("circle parameterization stays on the circle") {
  auto circ = named_curve("circle");
  SplitMix64 g(5);
  for (int i = 0; i < 25; ++i) {
    Rational t(mpz_class(g.uniform(-50, 50)), mpz_class(g.uniform(1, 9)));
    if (circ.is_pole(t)) continue;
    auto p = circ.eval(t);
    CHECK(p[0] * p[0] + p[1] * p[1] == Rational(1));
  }
}

TEST_CASE("poles are detected and rejected") {
  auto hyp = named_curve("hyperbola");
  REQUIRE(hyp.has_denominators());
  auto polys = hyp.pole_polys();
  REQUIRE(!polys.empty());
  // Every root of a pole polynomial is refused by eval.
  Rational pole(0);
  bool found = false;
  for (const auto& q : polys)
    if (q.degree() == 1) {
      pole = -q.coef(0) / q.coef(1);
      found = true;
    }
  REQUIRE(found);
  CHECK(hyp.is_pole(pole));
  CHECK_THROWS_AS(hyp.eval(pole), Error);
  CHECK(!hyp.is_pole(pole + Rational(1)));
}

TEST_CASE("collinearity polynomial matches the orientation determinant") {
  MultiPoly F = collinearity_poly();
  SplitMix64 g(17);
  for (int i = 0; i < 60; ++i) {
    std::array<Rational, 2> a{Rational(static_cast<long>(g.uniform(-9, 9))),
                              Rational(static_cast<long>(g.uniform(-9, 9)))};
    std::array<Rational, 2> b{Rational(static_cast<long>(g.uniform(-9, 9))),
                              Rational(static_cast<long>(g.uniform(-9, 9)))};
    std::array<Rational, 2> c{Rational(static_cast<long>(g.uniform(-9, 9))),
                              Rational(static_cast<long>(g.uniform(-9, 9)))};
    std::vector<Rational> pt{a[0], a[1], b[0], b[1], c[0], c[1]};
    CHECK((F.eval(pt).is_zero()) == (orient(a, b, c) == 0));
  }
  // Exactly zero on a constructed collinear triple.
  std::vector<Rational> col{Rational(0), Rational(0), Rational(1), Rational(1),
                            Rational(2), Rational(2)};
  CHECK(F.eval(col).is_zero());
}

TEST_CASE("substitution clears denominators without changing the sign") {
  MultiPoly F = collinearity_poly();
  auto gB = named_curve("hyperbola");
  auto gC = named_curve("x-axis");
  auto sub = substitute_curves(F, gB, gC);
  CHECK(sub.H.vars() == hvars());
  CHECK(!sub.poles_b.empty());
  CHECK(sub.poles_c.empty());

  SplitMix64 g(29);
  for (int i = 0; i < 40; ++i) {
    Rational t(mpz_class(g.uniform(-30, 30)), mpz_class(g.uniform(1, 7)));
    Rational s(static_cast<long>(g.uniform(-20, 20)));
    if (gB.is_pole(t)) continue;
    std::array<Rational, 2> a{Rational(static_cast<long>(g.uniform(-9, 9))),
                              Rational(static_cast<long>(g.uniform(-9, 9)))};
    auto b = gB.eval(t);
    auto c = gC.eval(s);
    std::vector<Rational> fp{a[0], a[1], b[0], b[1], c[0], c[1]};
    std::vector<Rational> hp{a[0], a[1], t, s};
    CHECK(sub.H.eval(hp).sign() == F.eval(fp).sign());
  }
}

TEST_CASE("polynomial curves substitute exactly") {
  MultiPoly F = collinearity_poly();
  auto sub = substitute_curves(F, named_curve("parabola"), named_curve("x-axis"));
  CHECK(sub.poles_b.empty());
  std::vector<Rational> hp{Rational(1), Rational(1), Rational(1), Rational(5)};
  // a = (1,1) on the parabola point b(1) = (1,1): degenerate, H = 0.
  CHECK(sub.H.eval(hp).is_zero());
}

TEST_CASE("curve hash and string are stable") {
  auto c1 = named_curve("parabola");
  auto c2 = named_curve("parabola");
  CHECK(c1.hash() == c2.hash());
  CHECK(c1.to_string() == c2.to_string());
  CHECK(c1.hash() != named_curve("cubic").hash());
}
