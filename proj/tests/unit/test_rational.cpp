#include "doctest.h"
#include "rational.hpp"
#include "rng.hpp"

using namespace trivar;

TEST_CASE("rational canonical form") {
  Rational a(mpz_class(4), mpz_class(6));
  CHECK(a.num() == 2);
  CHECK(a.den() == 3);

  Rational b(mpz_class(1), mpz_class(-2));
  CHECK(b.num() == -1);
  CHECK(b.den() == 2);

  CHECK(Rational(mpz_class(0), mpz_class(-7)) == Rational(0));
  CHECK_THROWS_AS(Rational(mpz_class(1), mpz_class(0)), Error);
}

TEST_CASE("rational string round trip") {
  for (const char* s : {"0", "-3", "7/2", "-22/7", "123456789123456789/987654321"}) {
    Rational v = Rational::from_string(s);
    CHECK(Rational::from_string(v.to_string()) == v);
  }
  CHECK_THROWS_AS(Rational::from_string("1/0"), Error);
  CHECK_THROWS_AS(Rational::from_string(""), Error);
  CHECK_THROWS_AS(Rational::from_string("x"), Error);
  // Non-canonical input normalizes.
  CHECK(Rational::from_string("6/4").to_string() == "3/2");
  CHECK(Rational::from_string("-6/4").den() == 2);
}

static Rational rnd(SplitMix64& g) {
  long num = static_cast<long>(g.uniform(-1000, 1000));
  long den = static_cast<long>(g.uniform(1, 60));
  return Rational(mpz_class(num), mpz_class(den));
}

TEST_CASE("rational field identities") {
  SplitMix64 g(42);
  for (int i = 0; i < 200; ++i) {
    Rational a = rnd(g), b = rnd(g), c = rnd(g);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a - b == -(b - a));
    CHECK(a + b == b + a);
    CHECK((a * b) * c == a * (b * c));
    if (!b.is_zero()) CHECK((a / b) * b == a);
    CHECK(a.abs().sign() >= 0);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("rational ordering and mid") {
  SplitMix64 g(7);
  for (int i = 0; i < 100; ++i) {
    Rational a = rnd(g), b = rnd(g);
    int c = Rational::cmp(a, b);
    CHECK(c == -Rational::cmp(b, a));
    if (c < 0) {
      Rational m = Rational::mid(a, b);
      CHECK(a < m);
      CHECK(m < b);
    }
    // Double conversion preserves strict order at this magnitude.
    if (c != 0) CHECK((a.to_double() < b.to_double()) == (c < 0));
  }
}

TEST_CASE("rational inverse and division by zero") {
  CHECK(Rational(mpz_class(3), mpz_class(7)).inverse() == Rational(mpz_class(7), mpz_class(3)));
  CHECK_THROWS_AS(Rational(0).inverse(), Error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
}

TEST_CASE("taint propagates through arithmetic") {
  Rational t = Rational(3).with_taint();
  CHECK(t.tainted());
  CHECK(!Rational(3).tainted());
  CHECK((t + Rational(2)).tainted());
  CHECK((Rational(2) * t).tainted());
  CHECK((-t).tainted());
  // Taint does not affect value equality or hashing.
  CHECK(t == Rational(3));
  CHECK(t.hash() == Rational(3).hash());
}

TEST_CASE("rational hash consistency") {
  Rational a = Rational::from_string("10/4");
  Rational b = Rational::from_string("5/2");
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK(Rational(1).hash() != Rational(2).hash());
}
