#include <cmath>

#include "bench.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace trivar;

TEST_CASE("log-log least squares recovers a power law") {
  std::vector<double> xs, ys;
  for (double x : {256.0, 512.0, 1024.0, 2048.0, 4096.0}) {
    xs.push_back(x);
    ys.push_back(3.0 * std::pow(x, 1.5));
  }
  auto fit = fit_log2(xs, ys);
  CHECK(fit.slope == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(fit.residual == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.points == 5);
}

TEST_CASE("median of odd and even runs") {
  CHECK(median_of({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median_of({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(median_of({7.0}) == 7.0);
}

TEST_CASE("direct sort baseline agrees with the oracle") {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    InstanceSpec spec;
    spec.family = seed % 3 ? "uniform-random" : "planted-collinear";
    spec.n = 6 + (seed % 14);
    spec.seed = seed * 17 + 1;
    Instance inst = generate(spec);
    Decision dec = collinear_211_directsort(inst);
    CHECK(dec.found == oracle_has_triple(inst));
    CHECK(dec.ledger.total(Phase::sign_resolution) > 0);
  }
}

TEST_CASE("direct sort baseline counts every comparator call") {
  InstanceSpec spec;
  spec.family = "uniform-random";
  spec.n = 16;
  spec.seed = 5;
  Instance inst = generate(spec);
  Decision dec = collinear_211_directsort(inst);
  auto sort_diag = dec.diagnostics["sort"];
  CHECK(sort_diag["pairs"].get<uint64_t>() == 16 * 16);
  // Comparator calls dominate: at least n^2 log-ish work was charged.
  CHECK(sort_diag["comparisons"].get<uint64_t>() > 16 * 16);
  CHECK(dec.ledger.total(Phase::sign_resolution) >=
        sort_diag["comparisons"].get<uint64_t>());
}

TEST_CASE("bench sweep produces fits and baselines") {
  BenchConfig cfg;
  cfg.family = "planted-collinear";
  cfg.pipeline = "211-line";
  cfg.sizes = {8, 12, 16, 20};
  cfg.seeds = 2;
  cfg.seed0 = 1;
  cfg.baselines = "all";
  cfg.threads = 1;
  auto rep = run_bench(cfg);
  CHECK(rep["family"] == "planted-collinear");
  CHECK(rep["main"]["per_size"].size() == 4);
  for (const auto& row : rep["main"]["per_size"]) {
    CHECK(row["runs"].get<int>() == 2);
    CHECK(row["median_count"].get<double>() > 0);
  }
  CHECK(!rep["main"]["fit"].is_null());
  CHECK(rep["baselines"].contains("direct-sort"));
  CHECK(rep["baselines"].contains("oracle"));
  // The oracle counts exactly n^3 tests per run.
  auto orow = rep["baselines"]["oracle"]["per_size"][0];
  CHECK(orow["median_count"].get<double>() == 8 * 8 * 8);
  CHECK(rep["partial"] == false);
}

TEST_CASE("bench config validation") {
  BenchConfig cfg;
  cfg.sizes = {16, 8};
  CHECK_THROWS_AS(run_bench(cfg), Error);
  cfg.sizes = {8};
  cfg.seeds = 0;
  CHECK_THROWS_AS(run_bench(cfg), Error);
}

TEST_CASE("bench honors its budget") {
  BenchConfig cfg;
  cfg.family = "uniform-random";
  cfg.pipeline = "211-line";
  cfg.sizes = {8, 12, 16, 20, 24, 28};
  cfg.seeds = 3;
  cfg.budget_seconds = 1e-9;
  cfg.baselines = "none";
  cfg.threads = 1;
  auto rep = run_bench(cfg);
  CHECK(rep["partial"] == true);
}

TEST_CASE("auto baseline policy follows the size ceiling") {
  BenchConfig cfg;
  cfg.family = "uniform-random";
  cfg.pipeline = "211-line";
  cfg.sizes = {8, 10};
  cfg.seeds = 1;
  cfg.baselines = "auto";
  cfg.threads = 1;
  auto rep = run_bench(cfg);
  CHECK(rep["baselines"].contains("oracle"));      // max size below the oracle ceiling
  CHECK(rep["baselines"].contains("direct-sort"));
  CHECK(rep["main"]["fit"].is_null());  // two sizes cannot support a fit
}
