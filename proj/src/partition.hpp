#pragma once

#include <memory>
#include <optional>

#include "curve.hpp"
#include "instance.hpp"
#include "meter.hpp"
#include "realroot.hpp"
#include "rng.hpp"

namespace trivar {

using Point2 = std::array<Rational, 2>;

// Variables of partition factor polynomials.
inline const std::vector<std::string>& xyvars() {
  static const std::vector<std::string> v{"x", "y"};
  return v;
}

// One realized sign-vector class (or an arc piece of one, when some factor
// vanishes on its points). Cells are classes, not connected components:
// disconnected classes only inflate loads, which the builder verifies.
struct PlanarCell {
  std::vector<int> sign_vector;   // over the node's factors
  int arc_id = -1;                // >= 0 for pieces of a zero-sign class
  Point2 reference_point;        // an associated point; realizes the signs
  std::array<RatInterval, 2> bbox;
  std::vector<size_t> associated;  // global point indices
  bool has_zero_sign() const;
};

struct PartitionResult {
  std::vector<MultiPoly> factors;  // in (x, y), each degree <= 2
  int total_degree = 0;
  std::vector<PlanarCell> cells;
  bool bounds_ok = true;     // per-cell load <= bound (unsplittable cells exempt)
  size_t worst_load = 0;
  size_t target_load = 0;
  int retries_used = 0;
};

// Supplies candidate factor sets; the builder verifies loads exactly and
// patches violations with bisecting lines, so providers may be heuristic.
class PartitionProvider {
 public:
  virtual ~PartitionProvider() = default;
  virtual std::string name() const = 0;
  // Strict providers promise the bound is reachable; the builder errors if
  // retries cannot patch a violation. Lenient ones only flag it.
  virtual bool strict() const = 0;
  virtual std::vector<MultiPoly> propose(const std::vector<Point2>& pts,
                                         const std::vector<size_t>& subset, int D,
                                         size_t target, SplitMix64& rng,
                                         SignTestLedger* ledger) const = 0;
};

// Default: rounds of bisecting cuts. Round one is an exact median line;
// later rounds bisect all overloaded classes at once with degree-2 curves
// (Veronese coefficient vectors, randomized hill-climb, exact scoring).
const PartitionProvider& ham_sandwich_provider();
// Fallback: axis-parallel quantile lines; weaker guarantees, flagged.
const PartitionProvider& quantile_provider();
const PartitionProvider& provider_by_name(const std::string& name);

// Partition `subset` of pts into sign-vector classes of load <= ceil(|subset|/D^2).
// Points on factors go to arc cells. Factors come out tainted: they are
// input-derived, so downstream sign tests against them are chargeable.
PartitionResult build_partition(const std::vector<Point2>& pts, const std::vector<size_t>& subset,
                                int D, const PartitionProvider& provider, SplitMix64& rng,
                                SignTestLedger* ledger = nullptr);

// Arcs of a parameterized curve holding <= ceil(|Q|/target^2) parameters
// each (identical values stay together and may overflow). Cuts are strictly
// between consecutive distinct values and never in Q.
struct CurveArc {
  std::vector<size_t> members;        // indices into Q
  std::optional<Rational> lo, hi;     // cut parameters; nullopt at the ends
};
std::vector<CurveArc> partition_curve_points(const std::vector<Rational>& Q, int target);

// Hierarchical partition: each node's points are split by a fresh partition
// until <= r remain. Nodes whose points are all identical stop early.
struct PartitionNode {
  PlanarCell cell;        // within the parent's factors; root holds everything
  uint32_t parent = 0;
  int level = 0;
  bool bottom = false;
  bool unsplittable = false;
  // Set on internal nodes: the partition splitting this node's points.
  std::vector<MultiPoly> factors;
  int total_degree = 0;
  std::vector<uint32_t> children;
};

class PartitionTree {
 public:
  const std::vector<PartitionNode>& nodes() const { return nodes_; }
  const PartitionNode& node(uint32_t id) const { return nodes_[id]; }
  const std::vector<Point2>& points() const { return pts_; }
  size_t r() const { return r_; }
  int D() const { return D_; }
  int depth() const;
  std::vector<uint32_t> bottom_nodes() const;
  bool bounds_ok() const { return bounds_ok_; }
  const std::string& provider_name() const { return provider_; }
  std::string stats_json(int indent = -1) const;

 private:
  friend PartitionTree build_hierarchy(const std::vector<Point2>&, size_t, int,
                                       const PartitionProvider&, uint64_t, SignTestLedger*);
  std::vector<PartitionNode> nodes_;
  std::vector<Point2> pts_;
  size_t r_ = 1;
  int D_ = 2;
  bool bounds_ok_ = true;
  std::string provider_;
};

PartitionTree build_hierarchy(const std::vector<Point2>& pts, size_t r, int D,
                              const PartitionProvider& provider = ham_sandwich_provider(),
                              uint64_t seed = 1, SignTestLedger* ledger = nullptr);

// Exact crossing enumeration for a parameterized query curve: node ids
// (all levels) whose cell region meets the curve, children only explored
// under reached parents. Sign tests against input-derived factors and cut
// comparisons are charged to `phase` when a ledger is given.
std::vector<uint32_t> cells_reached_by_curve(const PartitionTree& tree, const ParamCurve& curve,
                                             SignTestLedger* ledger = nullptr,
                                             Phase phase = Phase::search);

}  // namespace trivar
