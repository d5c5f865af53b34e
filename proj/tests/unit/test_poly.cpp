#include <vector>

#include "curve.hpp"
#include "doctest.h"
#include "poly.hpp"
#include "rng.hpp"

using namespace trivar;

namespace {

UniPoly up(std::initializer_list<long> coefs) {
  std::vector<Rational> c;
  for (long v : coefs) c.emplace_back(v);
  return UniPoly(std::move(c));
}

MultiPoly rnd_poly(SplitMix64& g, const std::vector<std::string>& vars, int max_deg) {
  MultiPoly p = MultiPoly::constant(vars, Rational(static_cast<long>(g.uniform(-5, 5))));
  int terms = static_cast<int>(g.uniform(1, 5));
  for (int i = 0; i < terms; ++i) {
    MultiPoly m = MultiPoly::constant(vars, Rational(static_cast<long>(g.uniform(-4, 4))));
    for (const auto& v : vars)
      m = m * MultiPoly::var(vars, v, static_cast<unsigned>(g.uniform(0, max_deg)));
    p = p + m;
  }
  return p;
}

std::vector<Rational> rnd_point(SplitMix64& g, size_t k) {
  std::vector<Rational> pt;
  for (size_t i = 0; i < k; ++i)
    pt.push_back(Rational(mpz_class(g.uniform(-9, 9)), mpz_class(g.uniform(1, 4))));
  return pt;
}

}  // namespace

TEST_CASE("unipoly basics") {
  UniPoly p = up({-6, 1, 1});  // (t-2)(t+3)
  CHECK(p.degree() == 2);
  CHECK(p.eval(Rational(2)).is_zero());
  CHECK(p.eval(Rational(-3)).is_zero());
  CHECK(p.sign_at(Rational(0)) == -1);
  CHECK(p.sign_at(Rational(10)) == 1);
  CHECK(up({0, 0, 0}).is_zero());
  CHECK(p.scaled(Rational(2)).coef(2) == 2);
  CHECK(p.derivative() == up({1, 2}));
}

TEST_CASE("unipoly divmod invariant") {
  SplitMix64 g(11);
  for (int it = 0; it < 60; ++it) {
    std::vector<Rational> nc, dc;
    int dn = static_cast<int>(g.uniform(0, 6)), dd = static_cast<int>(g.uniform(0, 4));
    for (int i = 0; i <= dn; ++i) nc.emplace_back(static_cast<long>(g.uniform(-8, 8)));
    for (int i = 0; i <= dd; ++i) dc.emplace_back(static_cast<long>(g.uniform(-8, 8)));
    UniPoly n(std::move(nc)), d(std::move(dc));
    if (d.is_zero()) continue;
    auto [q, r] = UniPoly::divmod(n, d);
    CHECK(q * d + r == n);
    CHECK(r.degree() < d.degree());
  }
}

TEST_CASE("unipoly gcd finds the shared factor") {
  UniPoly a = up({-1, 1}) * up({2, 1});  // (t-1)(t+2)
  UniPoly b = up({-1, 1}) * up({3, 1});  // (t-1)(t+3)
  UniPoly g = UniPoly::gcd(a, b);
  CHECK(g.degree() == 1);
  CHECK(g.eval(Rational(1)).is_zero());
  CHECK(UniPoly::gcd(up({1}), a).degree() == 0);
  CHECK(UniPoly::gcd(UniPoly(), a).monic() == a.monic());  // gcd(0, a) ~ a
}

TEST_CASE("unipoly squarefree part") {
  UniPoly p = up({-1, 1}) * up({-1, 1}) * up({2, 1});  // (t-1)^2 (t+2)
  UniPoly sf = p.squarefree_part();
  CHECK(sf.degree() == 2);
  CHECK(sf.eval(Rational(1)).is_zero());
  CHECK(sf.eval(Rational(-2)).is_zero());
  CHECK(UniPoly::gcd(sf, sf.derivative()).degree() == 0);
}

TEST_CASE("unipoly root bound contains the roots") {
  UniPoly p = up({-10, 1}) * up({3, 1});  // roots 10, -3
  Rational b = p.root_bound();
  CHECK(b >= Rational(10));
  CHECK(-b <= Rational(-3));
}

TEST_CASE("multipoly arithmetic agrees with pointwise evaluation") {
  std::vector<std::string> vars{"x", "y", "z"};
  SplitMix64 g(23);
  for (int it = 0; it < 40; ++it) {
    MultiPoly a = rnd_poly(g, vars, 2), b = rnd_poly(g, vars, 2), c = rnd_poly(g, vars, 2);
    auto pt = rnd_point(g, 3);
    CHECK((a * b + c).eval(pt) == a.eval(pt) * b.eval(pt) + c.eval(pt));
    CHECK((a - b).eval(pt) == a.eval(pt) - b.eval(pt));
    CHECK(a.pow(3).eval(pt) == a.eval(pt) * a.eval(pt) * a.eval(pt));
  }
}

TEST_CASE("multipoly partial evaluation and coefficient split") {
  std::vector<std::string> vars{"x", "y"};
  auto X = MultiPoly::var(vars, "x");
  auto Y = MultiPoly::var(vars, "y");
  MultiPoly p = X * X * Y + Y.scaled(Rational(3)) - MultiPoly::constant(vars, Rational(5));

  MultiPoly q = p.eval_partial({{0, Rational(2)}});
  CHECK(!q.depends_on(0));
  CHECK(q.to_unipoly(1) == up({-5, 7}));

  auto cs = p.coefficients_in(0);  // coefficients of x^0, x^1, x^2 in y
  REQUIRE(cs.size() == 3);
  CHECK(cs[1].is_zero());
  CHECK(MultiPoly::from_coefficients(0, cs, vars) == p);
}

TEST_CASE("multipoly unipoly round trip and embedding") {
  UniPoly u = up({1, 0, -2});
  MultiPoly m = MultiPoly::from_unipoly(u, {"a", "t"}, 1);
  CHECK(m.to_unipoly(1) == u);
  CHECK(!m.depends_on(0));
  MultiPoly e = m.embedded(hvars());
  CHECK(e.depends_on(2));  // t sits at index 2 in (x1, x2, t, s)
  std::vector<Rational> pt{Rational(9), Rational(9), Rational(3), Rational(9)};
  CHECK(e.eval(pt) == u.eval(Rational(3)));
}

TEST_CASE("multipoly content and exact division") {
  std::vector<std::string> vars{"x", "y"};
  auto X = MultiPoly::var(vars, "x");
  auto Y = MultiPoly::var(vars, "y");
  MultiPoly p = (X.scaled(Rational(4)) + Y.scaled(Rational(6)));
  MultiPoly prim = p.primitive_part();
  CHECK(prim.content() == Rational(1));
  CHECK(MultiPoly::div_exact(p, prim).has_value());
  CHECK(!MultiPoly::div_exact(X, Y).has_value());

  MultiPoly prod = p * (X - Y);
  auto q = MultiPoly::div_exact(prod, X - Y);
  REQUIRE(q.has_value());
  CHECK(*q == p);
}

TEST_CASE("multipoly gcd of products keeps the common factor") {
  std::vector<std::string> vars{"x", "y"};
  auto X = MultiPoly::var(vars, "x");
  auto Y = MultiPoly::var(vars, "y");
  MultiPoly common = X + Y;
  MultiPoly a = common * (X - Y);
  MultiPoly b = common * X;
  MultiPoly g = MultiPoly::gcd(a, b);
  CHECK(g.total_degree() == 1);
  CHECK(MultiPoly::div_exact(a, g).has_value());
  CHECK(MultiPoly::div_exact(b, g).has_value());
  CHECK(MultiPoly::div_exact(common, g).has_value());
}

TEST_CASE("resultant vanishes exactly on shared roots") {
  std::vector<std::string> vars{"x", "y"};
  auto X = MultiPoly::var(vars, "x");
  auto Y = MultiPoly::var(vars, "y");

  // Res_x(x^2 - 2, x - y) = y^2 - 2 up to sign.
  MultiPoly r =
      MultiPoly::resultant(X * X - MultiPoly::constant(vars, Rational(2)), X - Y, 0);
  MultiPoly expect = Y * Y - MultiPoly::constant(vars, Rational(2));
  CHECK((r == expect || r == -expect));

  // Shared factor (x - 2) forces a zero resultant.
  MultiPoly a = (X - MultiPoly::constant(vars, Rational(2))) *
                (X - MultiPoly::constant(vars, Rational(3)));
  MultiPoly b = X - MultiPoly::constant(vars, Rational(2));
  CHECK(MultiPoly::resultant(a, b, 0).is_zero());

  // Specialization: the slices p(x, y0), q(x, y0) share a root iff
  // y0^2 + y0 = 0 (substitute q's root x = -y0 into p).
  MultiPoly p = X * X + Y;
  MultiPoly q = X + Y;
  MultiPoly rs = MultiPoly::resultant(p, q, 0);
  std::vector<Rational> at{Rational(0), Rational(-4)};
  CHECK(rs.eval(at) != 0);
  std::vector<Rational> zero_at{Rational(0), Rational(-1)};
  CHECK(rs.eval(zero_at).is_zero());
}

TEST_CASE("taint propagates through poly operations") {
  std::vector<std::string> vars{"x", "y"};
  MultiPoly p = MultiPoly::var(vars, "x");
  CHECK(!p.tainted());
  p.mark_tainted();
  CHECK((p + MultiPoly::var(vars, "y")).tainted());
  CHECK(p.eval_partial({{0, Rational(1)}}).tainted());
  UniPoly u = up({1, 2});
  u.mark_tainted();
  CHECK((u * up({1})).tainted());
  CHECK(u.eval(Rational(1)).tainted());
}
