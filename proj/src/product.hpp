#pragma once

#include "partition.hpp"

namespace trivar {

// 1-D hierarchy over curve parameters: quantile chunks per level, identical
// values never separated. The right factor of 2x1 product trees.
struct ParamNode {
  std::vector<size_t> members;  // indices into the parameter list
  RatInterval interval;         // hull of member values
  uint32_t parent = 0;
  int level = 0;
  bool bottom = false;
  std::vector<uint32_t> children;
};

class ParamTree {
 public:
  const std::vector<ParamNode>& nodes() const { return nodes_; }
  const ParamNode& node(uint32_t id) const { return nodes_[id]; }
  const std::vector<Rational>& params() const { return params_; }
  size_t s() const { return s_; }
  size_t branching() const { return branching_; }
  int depth() const;

 private:
  friend ParamTree build_param_tree(const std::vector<Rational>&, size_t, size_t);
  std::vector<ParamNode> nodes_;
  std::vector<Rational> params_;
  size_t s_ = 1;
  size_t branching_ = 2;
};

// Split Q until nodes hold <= s values; `branching` children per node.
ParamTree build_param_tree(const std::vector<Rational>& Q, size_t s, size_t branching);

// Appendix degree pairing: D2 = round(D1^(log(n/s)/log(n/r))), clamped to
// [ceil(sqrt(D1)), D1^2]. Exposed for reports; construction uses a branching
// factor chosen to equalize depths, which this value motivates.
int paired_degree_d2(int D1, size_t n, size_t r, size_t s);

struct PairId {
  uint32_t left, right;
  friend bool operator==(const PairId&, const PairId&) = default;
  friend auto operator<=>(const PairId&, const PairId&) = default;
};

// Query surface over the product space: zero set of one or two polynomials.
// Interval evaluation over cell boxes gives the sound crossing test.
struct QuerySurface {
  std::vector<MultiPoly> defining;
  bool good_fibers_certified = false;
};

// Level-synchronized product of two planar hierarchies. Pairs are implicit:
// a bottom node pairs with every node of the other side's remaining levels
// through self-padding, so associated products partition P1 x P2.
class ProductTree22 {
 public:
  ProductTree22(PartitionTree left, PartitionTree right)
      : left_(std::move(left)), right_(std::move(right)) {}
  const PartitionTree& left() const { return left_; }
  const PartitionTree& right() const { return right_; }
  bool pair_is_bottom(PairId p) const;
  std::vector<PairId> children_of(PairId p) const;
  std::vector<PairId> bottom_pairs() const;  // materialized; test-sized inputs only

 private:
  PartitionTree left_, right_;
};

class ProductTree21 {
 public:
  ProductTree21(PartitionTree planar, ParamTree curve)
      : planar_(std::move(planar)), curve_(std::move(curve)) {}
  const PartitionTree& planar() const { return planar_; }
  const ParamTree& curve() const { return curve_; }
  bool pair_is_bottom(PairId p) const;
  std::vector<PairId> children_of(PairId p) const;
  std::vector<PairId> bottom_pairs() const;

 private:
  PartitionTree planar_;
  ParamTree curve_;
};

ProductTree22 build_product_22(const std::vector<Point2>& P1, const std::vector<Point2>& P2,
                               size_t r, int D = 2,
                               const PartitionProvider& provider = ham_sandwich_provider(),
                               uint64_t seed = 1, SignTestLedger* ledger = nullptr);

ProductTree21 build_product_21(const std::vector<Point2>& P, const std::vector<Rational>& Q,
                               size_t r, size_t s, int D1 = 2,
                               const PartitionProvider& provider = ham_sandwich_provider(),
                               uint64_t seed = 1, SignTestLedger* ledger = nullptr);

// Sound overapproximation of the pairs whose associated products can contain
// a zero of the surface system: a pair is pruned only when some defining
// polynomial's interval over the pair's box excludes zero, and children are
// visited only under reached parents. One sign test is charged per visited
// pair per polynomial actually evaluated.
std::vector<PairId> cells_reached_by_surface(const ProductTree22& tree, const QuerySurface& S,
                                             SignTestLedger* ledger = nullptr,
                                             Phase phase = Phase::search,
                                             bool bottom_only = false);
std::vector<PairId> cells_reached_by_surface(const ProductTree21& tree, const QuerySurface& S,
                                             SignTestLedger* ledger = nullptr,
                                             Phase phase = Phase::search,
                                             bool bottom_only = false);

// Parameterized curve u -> (x1, x2, y1, y2) for one-dimensional queries
// against a 2x2 tree. Denominators never identically zero.
struct ProductCurve {
  std::array<UniPoly, 4> num;
  std::array<UniPoly, 4> den;  // constant 1 when polynomial
  static ProductCurve polynomial(std::array<UniPoly, 4> coords);
};

// Exact box test per pair: the parameter arcs where the curve lies inside
// the pair's box are found from coordinate-boundary roots; arc samples and
// the roots themselves are tested, so tangential touches are not missed.
std::vector<PairId> cells_reached_by_curve_22(const ProductTree22& tree, const ProductCurve& curve,
                                              SignTestLedger* ledger = nullptr,
                                              Phase phase = Phase::search);

// Per-level reached-pair counts for crossing reports.
std::string crossing_report_json(const ProductTree21& tree, const std::vector<PairId>& reached,
                                 int indent = -1);

}  // namespace trivar
