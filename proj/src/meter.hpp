#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>

namespace trivar {

// Where a counted sign test happened. partition_build is tracked separately
// so reports can show totals with and without preprocessing.
enum class Phase {
  partition_build,
  fredman_primal,
  fredman_dual,
  sign_resolution,
  search,
  degeneracy,
  oracle,
};
inline constexpr int kNumPhases = 7;
const char* phase_name(Phase ph);

// Tallies sign tests of constant-degree polynomials, keyed by
// (phase, polynomial degree, arity). Root isolation itself is free in the
// model; only sign evaluations touching input-derived quantities count.
// Not thread safe; each worker keeps its own ledger and merges.
class SignTestLedger {
 public:
  void record(Phase ph, int degree, int arity = 1, uint64_t times = 1);

  // Deduplicated variant for call sites that can repeat the exact same test
  // (identity is a caller-chosen stable key). Returns true when charged.
  bool record_memo(Phase ph, int degree, int arity, uint64_t identity);

  uint64_t total() const;
  uint64_t total(Phase ph) const;
  uint64_t total_excluding_partition_build() const;
  uint64_t memo_hits() const { return memo_hits_; }

  // degree -> count for one phase, summed over arity.
  std::map<int, uint64_t> by_degree(Phase ph) const;

  void merge(const SignTestLedger& other);
  void reset();

  // {"total":..., "total_excluding_partition_build":..., "memo_hits":...,
  //  "phases": {name: {"total":..., "by_degree": {"2": ...}}}}
  std::string report_json(int indent = -1) const;

 private:
  static constexpr int kMaxDegree = 63;  // larger degrees clamp into the last bucket
  static constexpr int kMaxArity = 7;
  std::array<std::array<uint64_t, (kMaxDegree + 1) * (kMaxArity + 1)>, kNumPhases> cells_{};
  std::unordered_set<uint64_t> seen_;
  uint64_t memo_hits_ = 0;
};

}  // namespace trivar
