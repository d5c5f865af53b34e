#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "oracle.hpp"
#include "product.hpp"

using namespace trivar;

namespace {

std::vector<Point2> random_points(uint64_t seed, size_t n) {
  InstanceSpec spec;
  spec.family = "uniform-random";
  spec.n = n;
  spec.seed = seed;
  return generate(spec).A;
}

std::vector<Rational> random_params(uint64_t seed, size_t n) {
  InstanceSpec spec;
  spec.family = "uniform-random";
  spec.n = n;
  spec.seed = seed;
  return generate(spec).T;
}

}  // namespace

TEST_CASE("param tree: loads, member intervals, coverage") {
  auto Q = random_params(3, 90);
  auto pt = build_param_tree(Q, 8, 3);
  CHECK(pt.s() == 8);
  size_t covered = 0;
  for (const auto& nd : pt.nodes()) {
    for (size_t m : nd.members) CHECK(nd.interval.contains(Q[m]));
    if (nd.bottom) {
      covered += nd.members.size();
      CHECK(nd.members.size() <= 8);
    }
    uint32_t my_id = static_cast<uint32_t>(&nd - pt.nodes().data());
    for (uint32_t c : nd.children) CHECK(pt.node(c).parent == my_id);
  }
  CHECK(covered == Q.size());
  CHECK(pt.depth() >= 1);
}

TEST_CASE("paired degree stays in its clamp window") {
  for (int D1 : {2, 4}) {
    int D2 = paired_degree_d2(D1, 4096, 64, 16);
    double lo = std::ceil(std::sqrt(static_cast<double>(D1)));
    CHECK(D2 >= static_cast<int>(lo));
    CHECK(D2 <= D1 * D1);
  }
}

TEST_CASE("product 2x2: bottom pairs cover the index product exactly once") {
  auto P1 = random_points(5, 60);
  auto P2 = random_points(6, 60);
  auto tree = build_product_22(P1, P2, 8, 2, ham_sandwich_provider(), 7);
  std::map<std::pair<size_t, size_t>, int> owner_count;
  for (const auto& pr : tree.bottom_pairs()) {
    CHECK(tree.pair_is_bottom(pr));
    const auto& li = tree.left().node(pr.left).cell.associated;
    const auto& ri = tree.right().node(pr.right).cell.associated;
    for (size_t i : li)
      for (size_t j : ri) owner_count[{i, j}]++;
  }
  CHECK(owner_count.size() == P1.size() * P2.size());
  for (const auto& [key, cnt] : owner_count) CHECK(cnt == 1);
}

TEST_CASE("product 2x1: bottom pairs cover points x parameters exactly once") {
  auto P = random_points(8, 70);
  auto Q = random_params(9, 70);
  auto tree = build_product_21(P, Q, 8, 4, 2, ham_sandwich_provider(), 7);
  std::map<std::pair<size_t, size_t>, int> owner_count;
  for (const auto& pr : tree.bottom_pairs()) {
    CHECK(tree.pair_is_bottom(pr));
    for (size_t i : tree.planar().node(pr.left).cell.associated)
      for (size_t u : tree.curve().node(pr.right).members) owner_count[{i, u}]++;
  }
  CHECK(owner_count.size() == P.size() * Q.size());
  for (const auto& [key, cnt] : owner_count) CHECK(cnt == 1);
}

TEST_CASE("pair children cover the pair and stay inside it") {
  auto P = random_points(10, 50);
  auto Q = random_params(11, 50);
  auto tree = build_product_21(P, Q, 8, 4, 2, ham_sandwich_provider(), 3);
  PairId root{0, 0};
  std::vector<PairId> frontier{root};
  std::set<std::pair<uint32_t, uint32_t>> visited;
  size_t bottoms = 0;
  while (!frontier.empty()) {
    PairId p = frontier.back();
    frontier.pop_back();
    CHECK(visited.insert({p.left, p.right}).second);
    if (tree.pair_is_bottom(p)) {
      ++bottoms;
      CHECK(tree.children_of(p).empty());
      continue;
    }
    auto kids = tree.children_of(p);
    CHECK(!kids.empty());
    for (auto k : kids) frontier.push_back(k);
  }
  CHECK(bottoms == tree.bottom_pairs().size());
}

TEST_CASE("surface reach includes the owning pair of a planted zero") {
  auto P = random_points(12, 60);
  auto Q = random_params(13, 60);
  auto tree = build_product_21(P, Q, 8, 4, 2, ham_sandwich_provider(), 5);
  // Surface through (A[i], T[u]): c1 (x1 - a1) + c2 (x2 - a2) + c3 (t - t0).
  for (size_t i : {size_t{0}, size_t{17}, size_t{42}}) {
    size_t u = (i * 13) % Q.size();
    auto vars = std::vector<std::string>{"x1", "x2", "t"};
    auto X1 = MultiPoly::var(vars, "x1"), X2 = MultiPoly::var(vars, "x2"),
         Tv = MultiPoly::var(vars, "t");
    MultiPoly f = (X1 - MultiPoly::constant(vars, P[i][0])).scaled(Rational(2)) +
                  (X2 - MultiPoly::constant(vars, P[i][1])).scaled(Rational(3)) +
                  (Tv - MultiPoly::constant(vars, Q[u])).scaled(Rational(5));
    QuerySurface qs;
    qs.defining.push_back(f);
    SignTestLedger led;
    auto reached = cells_reached_by_surface(tree, qs, &led, Phase::search, true);
    CHECK(led.total(Phase::search) > 0);
    bool found_owner = false;
    for (const auto& pr : reached) {
      const auto& li = tree.planar().node(pr.left).cell.associated;
      const auto& ru = tree.curve().node(pr.right).members;
      if (std::find(li.begin(), li.end(), i) != li.end() &&
          std::find(ru.begin(), ru.end(), u) != ru.end())
        found_owner = true;
    }
    CHECK(found_owner);
  }
}

TEST_CASE("surface reach prunes most pairs for a generic surface") {
  auto P = random_points(14, 80);
  auto Q = random_params(15, 80);
  auto tree = build_product_21(P, Q, 8, 4, 2, ham_sandwich_provider(), 5);
  auto vars = std::vector<std::string>{"x1", "x2", "t"};
  MultiPoly f = MultiPoly::var(vars, "x1") + MultiPoly::var(vars, "t").scaled(Rational(7)) -
                MultiPoly::constant(vars, Rational(123456));
  QuerySurface qs;
  qs.defining.push_back(f);
  auto reached = cells_reached_by_surface(tree, qs, nullptr, Phase::search, true);
  CHECK(reached.size() < tree.bottom_pairs().size());
}

TEST_CASE("curve reach in the 2x2 product hits the planted pair") {
  auto P1 = random_points(20, 40);
  auto P2 = random_points(21, 40);
  auto tree = build_product_22(P1, P2, 8, 2, ham_sandwich_provider(), 9);
  size_t i = 7, j = 31;
  // Segment from (P1[i], P2[j]) in the four coordinates, linear in u.
  ProductCurve pc = ProductCurve::polynomial(
      {UniPoly({P1[i][0], Rational(1)}), UniPoly({P1[i][1], Rational(-2)}),
       UniPoly({P2[j][0], Rational(3)}), UniPoly({P2[j][1], Rational(1)})});
  auto reached = cells_reached_by_curve_22(tree, pc);
  bool found_owner = false;
  for (const auto& pr : reached) {
    if (!tree.pair_is_bottom(pr)) continue;
    const auto& li = tree.left().node(pr.left).cell.associated;
    const auto& rj = tree.right().node(pr.right).cell.associated;
    if (std::find(li.begin(), li.end(), i) != li.end() &&
        std::find(rj.begin(), rj.end(), j) != rj.end())
      found_owner = true;
  }
  CHECK(found_owner);
}

TEST_CASE("crossing report parses and counts levels") {
  auto P = random_points(22, 60);
  auto Q = random_params(23, 60);
  auto tree = build_product_21(P, Q, 8, 4, 2, ham_sandwich_provider(), 5);
  auto vars = std::vector<std::string>{"x1", "x2", "t"};
  MultiPoly f = MultiPoly::var(vars, "x2") - MultiPoly::var(vars, "t");
  QuerySurface qs;
  qs.defining.push_back(f);
  auto reached = cells_reached_by_surface(tree, qs);
  auto j = nlohmann::json::parse(crossing_report_json(tree, reached));
  CHECK(j.contains("levels"));
  CHECK(j["total"] == reached.size());
}
