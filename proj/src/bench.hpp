#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "decision.hpp"
#include "instance.hpp"
#include "pipeline.hpp"

namespace trivar {

// Least-squares line through (log2 x, log2 y); residual is the root mean
// squared deviation in log2 space.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  size_t points = 0;
};

SlopeFit fit_log2(const std::vector<double>& xs, const std::vector<double>& ys);

double median_of(std::vector<double> v);

// Classical comparison baseline for the line case: one global sort of all
// phi(a, t) values by counted comparisons, then a counted binary search per
// s. Verdicts match the oracle; the count is the n^2 log n reference line.
Decision collinear_211_directsort(const Instance& inst);

struct BenchConfig {
  std::string family = "planted-sparse";
  std::string pipeline = "211-line";  // pipeline name | direct-sort | oracle
  std::vector<size_t> sizes;
  size_t seeds = 3;
  uint64_t seed0 = 1;
  std::string baselines = "auto";  // auto | none | all
  unsigned threads = 0;            // 0: $TRIVAR_THREADS, then hardware
  double budget_seconds = 0.0;     // 0: unlimited; exceeded -> partial report
  PipelineOptions opt;             // forwarded to pipeline runs
};

// Runs seeds-per-size instances through the chosen pipeline, medians the
// ledger totals, fits the log2-log2 slope (only with >= 4 sizes), and
// attaches baseline fits on the same instances.
nlohmann::json run_bench(const BenchConfig& cfg);

}  // namespace trivar
