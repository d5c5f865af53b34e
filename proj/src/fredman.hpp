#pragma once

#include <functional>
#include <span>

#include "interval.hpp"
#include "meter.hpp"
#include "rng.hpp"

namespace trivar {

// One side of a batched point-location problem. Points and surfaces are both
// items with coordinates in their own parameter space; a surface's coords are
// its dual point, which is what the role swap partitions.
struct PLItem {
  uint32_t id = 0;
  std::vector<Rational> coords;
  std::pair<uint32_t, uint32_t> payload{0, 0};
};

// Incidence predicate F(point, surface) with a sound interval form: the
// float range over any pair of boxes contains every exact value attained on
// them. degree/arity describe the counted sign test.
struct IncidenceFamily {
  std::function<int(const PLItem&, const PLItem&)> sign_exact;
  std::function<FloatInterval(std::span<const FloatInterval>, std::span<const FloatInterval>)>
      range;
  int degree = 2;
  int arity = 4;
};

// Complete bipartite block with one resolved sign per surface, shared by all
// of the block's points.
struct BipartiteBlock {
  std::vector<uint32_t> points;
  std::vector<uint32_t> surfaces;
  std::vector<int8_t> signs;  // parallel to surfaces
};

struct PLConfig {
  long r1j = 1, r2j = 1;        // rounded targets, reporting only
  double residual_n = 0;        // |r1j*r2j^2 - N| / N
  double residual_m = 0;        // |r1j^4*r2j - M| / M
  size_t leaf_cap = 64;         // max incidences resolved directly
  int depth_cap = 96;
  int kappa = 3;                // extra verification samples per block
};

// Closed forms r1^j = floor((M^2/N)^(1/7)), r2^j = floor((N^4/M)^(1/7)),
// computed by exact integer 7th roots. Errors unless M^2 >= N and N^4 >= M.
PLConfig solve_parameters(long M, long N);

struct LocateStats {
  size_t blocks = 0;
  size_t vertex_mass = 0;  // sum over blocks of |P| + |S|
  size_t covered_pairs = 0;
  size_t direct_pairs = 0;
  int max_depth = 0;
  size_t splits_point_side = 0;
  size_t splits_surface_side = 0;
  std::string to_json(int indent = -1) const;
};

// Emits edge-disjoint blocks covering every (point, surface) pair exactly
// once. Interval exclusion over the current boxes nominates a block; exact
// evaluation at a representative plus kappa samples confirms it; subproblems
// too tangled to split fall back to direct evaluation. The larger side is
// split at a coordinate median, so primal and dual rounds alternate whenever
// the sides stay balanced.
std::vector<BipartiteBlock> batched_locate(const std::vector<PLItem>& points,
                                           const std::vector<PLItem>& surfaces,
                                           const IncidenceFamily& F, const PLConfig& cfg,
                                           SignTestLedger* ledger = nullptr, uint64_t seed = 1,
                                           LocateStats* stats = nullptr);

// Re-verifies a random fraction of covered pairs against exact evaluation
// (at least one pair per block). Throws internal_error on any mismatch.
void verify_blocks(const std::vector<BipartiteBlock>& blocks, const std::vector<PLItem>& points,
                   const std::vector<PLItem>& surfaces, const IncidenceFamily& F,
                   double fraction = 0.01, uint64_t seed = 1, SignTestLedger* ledger = nullptr);

// Answers sign(point, surface) from the blocks. The batch already paid for
// these signs, so lookups charge nothing; a pair no block covers is a
// completeness violation and throws.
class BlockSignLookup {
 public:
  BlockSignLookup(const std::vector<BipartiteBlock>& blocks, size_t num_points,
                  size_t num_surfaces);
  int sign(uint32_t point, uint32_t surface) const;

 private:
  struct PerBlock {
    std::vector<uint32_t> surfaces;  // sorted
    std::vector<int8_t> signs;       // matching order
  };
  std::vector<PerBlock> prepared_;
  std::vector<std::vector<uint32_t>> blocks_of_point_;
};

// One round of box subdivision: cells hold at most point_cap points, and a
// surface is routed to every cell whose box its interval form cannot
// exclude a zero from. Sound, never exact: pipelines re-test survivors.
struct PLCellOut {
  std::vector<uint32_t> points;
  std::vector<uint32_t> surfaces;
  std::vector<FloatInterval> box;
};
std::vector<PLCellOut> partition_round(const std::vector<PLItem>& points,
                                       const std::vector<PLItem>& surfaces,
                                       const IncidenceFamily& F, size_t point_cap,
                                       SignTestLedger* ledger = nullptr);

}  // namespace trivar
