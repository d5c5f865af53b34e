#include <algorithm>

#include "doctest.h"
#include "goodfibers.hpp"
#include "oracle.hpp"

using namespace trivar;

namespace {

MultiPoly V(const char* n) { return MultiPoly::var(hvars(), n); }
MultiPoly C(long v) { return MultiPoly::constant(hvars(), Rational(v)); }

std::vector<Point2> mkA(std::initializer_list<std::pair<long, long>> ps) {
  std::vector<Point2> A;
  for (auto [x, y] : ps) A.push_back({Rational(x), Rational(y)});
  return A;
}

std::vector<Rational> mkQ(std::initializer_list<long> vs) {
  std::vector<Rational> q;
  for (long v : vs) q.emplace_back(v);
  return q;
}

bool brute_zero(const MultiPoly& H, const std::vector<Point2>& A,
                const std::vector<Rational>& T, const std::vector<Rational>& S) {
  for (const auto& a : A)
    for (const auto& t : T)
      for (const auto& s : S) {
        std::vector<Rational> pt{a[0], a[1], t, s};
        if (H.eval(pt).is_zero()) return true;
      }
  return false;
}

bool has_branch(const GoodFibersResult& r, const std::string& name) {
  return std::find(r.branches.begin(), r.branches.end(), name) != r.branches.end();
}

}  // namespace

TEST_CASE("zero polynomial resolves immediately") {
  auto A = mkA({{1, 2}});
  auto T = mkQ({3});
  auto S = mkQ({4});
  auto r = good_fibers_reduce_h(MultiPoly(hvars()), A, T, S);
  REQUIRE(r.resolved);
  CHECK(has_branch(r, "zero"));
  CHECK(r.decision->found);
}

TEST_CASE("empty input resolves to not found") {
  auto r = good_fibers_reduce_h(V("x1") + V("t"), {}, mkQ({1}), mkQ({2}));
  REQUIRE(r.resolved);
  CHECK(!r.decision->found);
}

TEST_CASE("x-independent polynomial goes through the independence branch") {
  // H = s^2 - t: witness iff some t equals some s squared.
  MultiPoly H = V("s") * V("s") - V("t");
  auto A = mkA({{0, 1}, {2, 3}});
  auto hit = good_fibers_reduce_h(H, A, mkQ({9, 5}), mkQ({3, 1}));
  REQUIRE(hit.resolved);
  CHECK(has_branch(hit, "independence"));
  CHECK(hit.decision->found);

  auto miss = good_fibers_reduce_h(H, A, mkQ({7, 5}), mkQ({3, 1}));
  REQUIRE(miss.resolved);
  CHECK(!miss.decision->found);
}

TEST_CASE("parameter-independent polynomial checks only A") {
  MultiPoly H = V("x1") * V("x1") + V("x2") * V("x2") - C(25);
  auto T = mkQ({1});
  auto S = mkQ({2});
  auto hit = good_fibers_reduce_h(H, mkA({{3, 4}, {0, 1}}), T, S);
  REQUIRE(hit.resolved);
  CHECK(has_branch(hit, "independence"));
  CHECK(hit.decision->found);
  CHECK(hit.decision->witness.has_value());

  auto miss = good_fibers_reduce_h(H, mkA({{1, 1}}), T, S);
  REQUIRE(miss.resolved);
  CHECK(!miss.decision->found);
}

TEST_CASE("s content factor is found through the exceptional values") {
  // H = (s - 2) * (x1 + x2 + t + s + 1).
  MultiPoly H = (V("s") - C(2)) * (V("x1") + V("x2") + V("t") + V("s") + C(1));
  auto A = mkA({{5, 7}});
  auto r = good_fibers_reduce_h(H, A, mkQ({11}), mkQ({2, 9}));
  REQUIRE(r.resolved);
  CHECK(has_branch(r, "s_content"));
  REQUIRE(r.decision->found);
  CHECK(r.decision->witness->s == Rational(2));
}

TEST_CASE("s content with no matching value defers to the residual") {
  // H = (s - 2)(x1 - t): 2 not in S, but a1 = 5 meets t = 5, so the stripped
  // residual resolves through the independence step.
  MultiPoly H = (V("s") - C(2)) * (V("x1") - V("t"));
  auto r = good_fibers_reduce_h(H, mkA({{5, 1}}), mkQ({5, 3}), mkQ({9, 4}));
  REQUIRE(r.resolved);
  CHECK(has_branch(r, "s_content"));
  CHECK(has_branch(r, "independence"));
  REQUIRE(r.decision->found);
  CHECK(r.decision->witness->t == Rational(5));
}

TEST_CASE("x content factor vanishing on a parameter pair") {
  // H = (t + s) * (x1 + 2 x2 + 1): t = 1, s = -1 kills the content.
  MultiPoly H = (V("t") + V("s")) * (V("x1") + V("x2").scaled(Rational(2)) + C(1));
  auto r = good_fibers_reduce_h(H, mkA({{4, 4}}), mkQ({1, 6}), mkQ({-1, 8}));
  REQUIRE(r.resolved);
  CHECK(has_branch(r, "x_content"));
  REQUIRE(r.decision->found);
  std::vector<Rational> w{r.decision->witness->a[0], r.decision->witness->a[1],
                          r.decision->witness->t, r.decision->witness->s};
  CHECK(H.eval(w).is_zero());
}

TEST_CASE("t content factor vanishing at a point-parameter pair") {
  // H = (x1 + s) * (t^2 + x2 t + 1): a = (-4, 1) with s = 4.
  MultiPoly H = (V("x1") + V("s")) * (V("t") * V("t") + V("x2") * V("t") + C(1));
  auto r = good_fibers_reduce_h(H, mkA({{-4, 1}}), mkQ({2}), mkQ({4, 7}));
  REQUIRE(r.resolved);
  CHECK(has_branch(r, "t_content"));
  REQUIRE(r.decision->found);
  CHECK(r.decision->witness->a[0] == Rational(-4));
  CHECK(r.decision->witness->s == Rational(4));
}

TEST_CASE("t-line fiber found through condition one") {
  // H = x1 t + x2 s: a = (0, 5) gives H(a, t, s) = 5 s, zero along s = 0.
  MultiPoly H = V("x1") * V("t") + V("x2") * V("s");
  auto r = good_fibers_reduce_h(H, mkA({{0, 5}, {3, 2}}), mkQ({1, 4}), mkQ({0, 6}));
  REQUIRE(r.resolved);
  CHECK(has_branch(r, "t_lines"));
  REQUIRE(r.decision->found);
  CHECK(r.decision->witness->a[0] == Rational(0));
  CHECK(r.decision->witness->s == Rational(0));
}

TEST_CASE("generic polynomial certifies good fibers unresolved") {
  MultiPoly H = V("x1") * V("t") + V("x2") * V("s") + C(1);
  auto A = mkA({{1, 2}, {3, 4}});
  auto r = good_fibers_reduce_h(H, A, mkQ({1, 2}), mkQ({3, 4}));
  CHECK(!r.resolved);
  CHECK(r.good_fibers_certified);
  REQUIRE(!r.branches.empty());
  CHECK(r.branches.back() == "t_lines");
  // Reduction removed nothing here; the residual equals the input.
  CHECK(r.H == H);
}

TEST_CASE("resolved verdicts match exhaustive evaluation") {
  auto A = mkA({{0, 5}, {1, 1}, {-2, 3}});
  auto T = mkQ({0, 1, 2});
  auto S = mkQ({-1, 0, 2});
  std::vector<MultiPoly> cases{
      (V("s") - C(2)) * (V("x1") + V("x2") + V("t") + V("s") + C(1)),
      (V("t") + V("s")) * (V("x1") - C(1)),
      V("x1") * V("t") + V("x2") * V("s"),
      V("t") - V("s"),
      V("x1") + V("x2") - C(2),
      (V("x1") + V("s")) * (V("t") + C(1)),
  };
  for (const auto& H : cases) {
    auto r = good_fibers_reduce_h(H, A, T, S);
    if (!r.resolved) continue;
    CHECK(r.decision->found == brute_zero(H, A, T, S));
    if (r.decision->found) {
      std::vector<Rational> w{r.decision->witness->a[0], r.decision->witness->a[1],
                              r.decision->witness->t, r.decision->witness->s};
      CHECK(H.eval(w).is_zero());
    }
  }
}

TEST_CASE("curve form substitutes before reducing") {
  auto A = mkA({{1, 1}, {2, 4}});  // both on the parabola
  auto T = mkQ({1, 3});
  auto S = mkQ({5});
  auto r = good_fibers_reduce(collinearity_poly(), named_curve("parabola"),
                              named_curve("x-axis"), A, T, S);
  // a = (1,1) coincides with b(1): H vanishes there whatever the branch.
  if (r.resolved) {
    CHECK(r.decision->found);
  } else {
    CHECK(brute_zero(r.H, A, T, S));
  }
}
