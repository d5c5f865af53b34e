#include <algorithm>
#include <map>

#include "doctest.h"
#include "fredman.hpp"

using namespace trivar;

namespace {

// One-dimensional incidence family: sign(point_value - surface_value).
IncidenceFamily diff_family() {
  IncidenceFamily F;
  F.sign_exact = [](const PLItem& p, const PLItem& s) {
    return Rational::cmp(p.coords[0], s.coords[0]);
  };
  F.range = [](std::span<const FloatInterval> pb, std::span<const FloatInterval> sb) {
    return pb[0] - sb[0];
  };
  F.degree = 1;
  F.arity = 2;
  return F;
}

std::vector<PLItem> items_from(const std::vector<Rational>& vals) {
  std::vector<PLItem> out;
  for (size_t i = 0; i < vals.size(); ++i) {
    PLItem it;
    it.id = static_cast<uint32_t>(i);
    it.coords = {vals[i]};
    out.push_back(std::move(it));
  }
  return out;
}

std::vector<Rational> random_vals(uint64_t seed, size_t n) {
  SplitMix64 g(seed);
  std::vector<Rational> v;
  for (size_t i = 0; i < n; ++i)
    v.emplace_back(mpz_class(g.uniform(-100000, 100000)), mpz_class(g.uniform(1, 64)));
  return v;
}

}  // namespace

TEST_CASE("parameter closed forms on power of two inputs") {
  auto cfg = solve_parameters(1L << 14, 1L << 7);
  CHECK(cfg.r1j == 8);
  CHECK(cfg.r2j == 4);
  cfg = solve_parameters(1L << 7, 1L << 7);
  CHECK(cfg.r1j == 2);
  CHECK(cfg.r2j == 8);
  cfg = solve_parameters(1L << 14, 1L << 14);
  CHECK(cfg.r1j == 4);
  CHECK(cfg.r2j == 64);
  cfg = solve_parameters(1L << 21, 1L << 14);
  CHECK(cfg.r1j == 16);
  CHECK(cfg.r2j == 32);
}

TEST_CASE("parameter floors on non powers") {
  auto cfg = solve_parameters(1000000, 10000);
  CHECK(cfg.r1j == 13);  // floor(10^(8/7))
  CHECK(cfg.r2j == 26);  // floor(10^(10/7))
  CHECK(cfg.residual_n >= 0);
  CHECK(cfg.residual_m >= 0);
}

TEST_CASE("parameter validity window") {
  CHECK_THROWS_AS(solve_parameters(2, 100), Error);       // M^2 < N
  CHECK_THROWS_AS(solve_parameters(1000000, 1), Error);   // N^4 < M
  CHECK_NOTHROW(solve_parameters(1, 1));
}

TEST_CASE("blocks cover every pair exactly once with correct signs") {
  for (uint64_t seed : {1u, 2u, 3u, 4u}) {
    SplitMix64 g(seed * 1009);
    size_t M = static_cast<size_t>(g.uniform(1, 200));
    size_t N = static_cast<size_t>(g.uniform(1, 200));
    auto pts = items_from(random_vals(seed, M));
    auto surs = items_from(random_vals(seed + 77, N));
    auto F = diff_family();
    PLConfig cfg;
    cfg.leaf_cap = 32;
    SignTestLedger led;
    LocateStats stats;
    auto blocks = batched_locate(pts, surs, F, cfg, &led, seed, &stats);
    CHECK(led.total() > 0);
    CHECK(stats.covered_pairs + stats.direct_pairs == M * N);

    std::map<std::pair<uint32_t, uint32_t>, int8_t> seen;
    for (const auto& b : blocks) {
      REQUIRE(b.signs.size() == b.surfaces.size());
      for (uint32_t p : b.points)
        for (size_t k = 0; k < b.surfaces.size(); ++k) {
          auto key = std::make_pair(p, b.surfaces[k]);
          CHECK(!seen.count(key));
          seen[key] = b.signs[k];
        }
    }
    CHECK(seen.size() == M * N);
    for (const auto& [key, sg] : seen)
      CHECK(static_cast<int>(sg) == F.sign_exact(pts[key.first], surs[key.second]));

    CHECK_NOTHROW(verify_blocks(blocks, pts, surs, F, 0.05, seed));
  }
}

TEST_CASE("lookup reconstructs exact sorted orders") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    size_t n = 4 + static_cast<size_t>(seed) % 61;
    auto vals = random_vals(seed * 131, n);
    auto pts = items_from(vals);
    auto surs = items_from(vals);  // self-comparison gives a total preorder
    auto F = diff_family();
    PLConfig cfg;
    auto blocks = batched_locate(pts, surs, F, cfg, nullptr, seed);
    BlockSignLookup look(blocks, pts.size(), surs.size());

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return look.sign(static_cast<uint32_t>(a), static_cast<uint32_t>(b)) < 0;
    });
    std::vector<size_t> direct(order.size());
    for (size_t i = 0; i < n; ++i) direct[i] = i;
    std::stable_sort(direct.begin(), direct.end(),
                     [&](size_t a, size_t b) { return vals[a] < vals[b]; });
    for (size_t i = 0; i < n; ++i) CHECK(vals[order[i]] == vals[direct[i]]);
    for (size_t i = 0; i + 1 < n; ++i) CHECK(vals[order[i]] <= vals[order[i + 1]]);
  }
}

TEST_CASE("uninformative ranges force exact fallback, never wrong signs") {
  auto pts = items_from(random_vals(5, 40));
  auto surs = items_from(random_vals(6, 40));
  IncidenceFamily F = diff_family();
  F.range = [](std::span<const FloatInterval>, std::span<const FloatInterval>) {
    return FloatInterval(-1.0, 1.0);  // never excludes zero
  };
  PLConfig cfg;
  auto blocks = batched_locate(pts, surs, F, cfg, nullptr, 9);
  BlockSignLookup look(blocks, pts.size(), surs.size());
  for (uint32_t i = 0; i < 40; ++i)
    for (uint32_t j = 0; j < 40; ++j)
      CHECK(look.sign(i, j) == F.sign_exact(pts[i], surs[j]));
}

TEST_CASE("degenerate inputs: ties and duplicates") {
  std::vector<Rational> vals(30, Rational(4));
  vals.resize(45, Rational(7));
  auto pts = items_from(vals);
  auto surs = items_from(vals);
  auto F = diff_family();
  PLConfig cfg;
  auto blocks = batched_locate(pts, surs, F, cfg, nullptr, 2);
  BlockSignLookup look(blocks, pts.size(), surs.size());
  CHECK(look.sign(0, 1) == 0);
  CHECK(look.sign(0, 44) < 0);
  CHECK(look.sign(44, 0) > 0);
}

TEST_CASE("quadratic incidence family") {
  // F(p, s) = p1^2 - s1: surfaces are horizontal parabola thresholds.
  IncidenceFamily F;
  F.sign_exact = [](const PLItem& p, const PLItem& s) {
    return (p.coords[0] * p.coords[0] - s.coords[0]).sign();
  };
  F.range = [](std::span<const FloatInterval> pb, std::span<const FloatInterval> sb) {
    return pb[0] * pb[0] - sb[0];
  };
  F.degree = 2;
  F.arity = 2;
  auto pts = items_from(random_vals(11, 90));
  auto surs = items_from(random_vals(12, 70));
  PLConfig cfg;
  SignTestLedger led;
  auto blocks = batched_locate(pts, surs, F, cfg, &led, 4);
  BlockSignLookup look(blocks, pts.size(), surs.size());
  for (uint32_t i = 0; i < 90; i += 7)
    for (uint32_t j = 0; j < 70; j += 5)
      CHECK(look.sign(i, j) == F.sign_exact(pts[i], surs[j]));
  // Batched resolution beats one test per pair on structured input.
  CHECK(led.total() < 90 * 70);
}

TEST_CASE("lookup throws on an uncovered pair") {
  auto pts = items_from(random_vals(21, 10));
  auto surs = items_from(random_vals(22, 10));
  auto blocks = batched_locate(pts, surs, diff_family(), PLConfig{});
  BlockSignLookup look(blocks, pts.size() + 1, surs.size());  // one point no block covers
  CHECK_THROWS_AS(look.sign(10, 0), Error);
}
