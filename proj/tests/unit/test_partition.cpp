#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "partition.hpp"

using namespace trivar;

namespace {

std::vector<Point2> random_points(uint64_t seed, size_t n) {
  InstanceSpec spec;
  spec.family = "uniform-random";
  spec.n = n;
  spec.seed = seed;
  return generate(spec).A;
}

// Sign vector soundness: every associated point realizes its cell's signs.
void check_cells(const std::vector<Point2>& pts, const std::vector<size_t>& subset,
                 const PartitionResult& part) {
  std::set<size_t> seen;
  for (const auto& cell : part.cells) {
    REQUIRE(cell.sign_vector.size() == part.factors.size());
    for (size_t idx : cell.associated) {
      CHECK(seen.insert(idx).second);
      std::vector<Rational> p{pts[idx][0], pts[idx][1]};
      for (size_t k = 0; k < part.factors.size(); ++k)
        CHECK(part.factors[k].eval(p).sign() == cell.sign_vector[k]);
      CHECK(cell.bbox[0].contains(pts[idx][0]));
      CHECK(cell.bbox[1].contains(pts[idx][1]));
    }
  }
  CHECK(seen.size() == subset.size());
  for (size_t idx : subset) CHECK(seen.count(idx) == 1);
}

}  // namespace

TEST_CASE("single partition: load bound, coverage, sign soundness") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    for (int D : {2, 4}) {
      auto pts = random_points(seed, 64);
      std::vector<size_t> subset(pts.size());
      for (size_t i = 0; i < pts.size(); ++i) subset[i] = i;
      SplitMix64 rng(seed * 31 + D);
      auto part = build_partition(pts, subset, D, ham_sandwich_provider(), rng);
      size_t bound = (subset.size() + D * D - 1) / (D * D);
      CHECK(part.bounds_ok);
      CHECK(part.worst_load <= bound);
      CHECK(part.target_load == bound);
      check_cells(pts, subset, part);
      for (const auto& f : part.factors) {
        CHECK(f.total_degree() <= 2);
        CHECK(f.tainted());
      }
    }
  }
}

TEST_CASE("partition of a subset only touches the subset") {
  auto pts = random_points(7, 40);
  std::vector<size_t> subset;
  for (size_t i = 0; i < pts.size(); i += 2) subset.push_back(i);
  SplitMix64 rng(7);
  auto part = build_partition(pts, subset, 2, ham_sandwich_provider(), rng);
  check_cells(pts, subset, part);
}

TEST_CASE("duplicate-heavy input is flagged unsplittable, not mangled") {
  std::vector<Point2> pts(30, Point2{Rational(1), Rational(2)});
  std::vector<size_t> subset(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) subset[i] = i;
  SplitMix64 rng(3);
  auto part = build_partition(pts, subset, 2, ham_sandwich_provider(), rng);
  size_t covered = 0;
  for (const auto& cell : part.cells) covered += cell.associated.size();
  CHECK(covered == pts.size());
}

TEST_CASE("quantile provider also respects the contract") {
  auto pts = random_points(11, 64);
  std::vector<size_t> subset(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) subset[i] = i;
  SplitMix64 rng(11);
  auto part = build_partition(pts, subset, 2, quantile_provider(), rng);
  check_cells(pts, subset, part);
  CHECK(provider_by_name("quantile-lines").name() == "quantile-lines");
  CHECK_THROWS_AS(provider_by_name("nonesuch"), Error);
}

TEST_CASE("curve point partition: loads, cut placement") {
  std::vector<Rational> Q;
  for (long i = 0; i < 50; ++i) Q.emplace_back(mpz_class(i * 7 % 50), mpz_class(1 + i % 3));
  auto arcs = partition_curve_points(Q, 4);
  size_t bound = (Q.size() + 15) / 16;
  std::set<size_t> seen;
  for (const auto& arc : arcs) {
    CHECK(arc.members.size() <= bound);
    for (size_t m : arc.members) {
      CHECK(seen.insert(m).second);
      if (arc.lo) CHECK(*arc.lo < Q[m]);
      if (arc.hi) CHECK(Q[m] < *arc.hi);
    }
    // Cuts never collide with data values.
    for (const auto& q : Q) {
      if (arc.lo) CHECK(*arc.lo != q);
      if (arc.hi) CHECK(*arc.hi != q);
    }
  }
  CHECK(seen.size() == Q.size());
}

TEST_CASE("identical parameter values stay together") {
  std::vector<Rational> Q(20, Rational(5));
  auto arcs = partition_curve_points(Q, 3);
  size_t nonempty = 0;
  for (const auto& arc : arcs)
    if (!arc.members.empty()) ++nonempty;
  CHECK(nonempty == 1);
}

TEST_CASE("hierarchy: bottom loads, disjoint coverage per level") {
  auto pts = random_points(13, 300);
  SignTestLedger led;
  auto tree = build_hierarchy(pts, 24, 2, ham_sandwich_provider(), 13, &led);
  CHECK(tree.bounds_ok());
  CHECK(led.total(Phase::partition_build) > 0);
  CHECK(led.total(Phase::partition_build) == led.total());

  size_t bottom_total = 0;
  for (uint32_t id : tree.bottom_nodes()) {
    const auto& nd = tree.node(id);
    if (!nd.unsplittable) CHECK(nd.cell.associated.size() <= 24);
    bottom_total += nd.cell.associated.size();
  }
  CHECK(bottom_total == pts.size());

  // Children partition their parent exactly.
  for (uint32_t id = 0; id < tree.nodes().size(); ++id) {
    const auto& nd = tree.node(id);
    if (nd.bottom) continue;
    std::set<size_t> child_union;
    size_t child_sum = 0;
    for (uint32_t c : nd.children) {
      for (size_t m : tree.node(c).cell.associated) child_union.insert(m);
      child_sum += tree.node(c).cell.associated.size();
    }
    CHECK(child_sum == nd.cell.associated.size());
    CHECK(child_union.size() == nd.cell.associated.size());
    for (size_t m : nd.cell.associated) CHECK(child_union.count(m) == 1);
  }

  auto stats = tree.stats_json();
  CHECK(stats.find("levels") != std::string::npos);
}

TEST_CASE("crossing query reaches the cell owning a planted point") {
  auto pts = random_points(17, 200);
  auto tree = build_hierarchy(pts, 16, 2, ham_sandwich_provider(), 17);
  // A line through A[i] must reach the bottom cell holding i.
  for (size_t i = 0; i < pts.size(); i += 37) {
    UniPoly x({pts[i][0], Rational(1)});   // x(u) = a1 + u
    UniPoly y({pts[i][1], Rational(2)});   // y(u) = a2 + 2u
    ParamCurve line(x, y);
    SignTestLedger led;
    auto reached = cells_reached_by_curve(tree, line, &led);
    CHECK(led.total() > 0);
    std::set<uint32_t> rset(reached.begin(), reached.end());
    for (uint32_t id : tree.bottom_nodes()) {
      const auto& assoc = tree.node(id).cell.associated;
      if (std::find(assoc.begin(), assoc.end(), i) != assoc.end()) CHECK(rset.count(id) == 1);
    }
  }
}

TEST_CASE("crossing enumeration only descends under reached parents") {
  auto pts = random_points(19, 150);
  auto tree = build_hierarchy(pts, 16, 2, ham_sandwich_provider(), 19);
  ParamCurve line(UniPoly({Rational(0), Rational(1)}), UniPoly({Rational(-100000), Rational(3)}));
  auto reached = cells_reached_by_curve(tree, line);
  std::set<uint32_t> rset(reached.begin(), reached.end());
  for (uint32_t id : reached) {
    const auto& nd = tree.node(id);
    if (id != 0 && nd.level > 0) CHECK(rset.count(nd.parent) == 1);
  }
}
