#include "product.hpp"

#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "realroot.hpp"

namespace trivar {

namespace {

RatInterval hull_of(const std::vector<Rational>& vals, const std::vector<size_t>& members) {
  RatInterval box(vals[members[0]]);
  for (size_t i : members) box = RatInterval::hull(box, RatInterval(vals[i]));
  return box;
}

}  // namespace

int ParamTree::depth() const {
  int d = 0;
  for (const auto& nd : nodes_) d = std::max(d, nd.level);
  return d;
}

ParamTree build_param_tree(const std::vector<Rational>& Q, size_t s, size_t branching) {
  if (Q.empty()) throw input_error("build_param_tree: empty parameter set");
  if (s < 1) throw input_error("build_param_tree: need s >= 1");
  branching = std::max<size_t>(2, branching);

  ParamTree tree;
  tree.params_ = Q;
  tree.s_ = s;
  tree.branching_ = branching;

  ParamNode root;
  root.members.resize(Q.size());
  for (size_t i = 0; i < Q.size(); ++i) root.members[i] = i;
  std::sort(root.members.begin(), root.members.end(),
            [&](size_t a, size_t b) { return Q[a] < Q[b]; });
  root.interval = hull_of(Q, root.members);
  tree.nodes_.push_back(std::move(root));

  std::vector<uint32_t> work{0};
  while (!work.empty()) {
    uint32_t id = work.back();
    work.pop_back();
    ParamNode& nd = tree.nodes_[id];
    if (nd.level > 64) throw internal_error("parameter hierarchy too deep");
    bool all_equal = Q[nd.members.front()] == Q[nd.members.back()];
    if (nd.members.size() <= s || all_equal) {
      nd.bottom = true;
      continue;
    }
    // Quantile chunks over the sorted members; runs of one value stay whole,
    // so a chunk may exceed its share but strictly shrinks.
    const auto& members = tree.nodes_[id].members;
    size_t share = (members.size() + branching - 1) / branching;
    std::vector<std::vector<size_t>> chunks;
    size_t i = 0;
    while (i < members.size()) {
      size_t j = std::min(i + share, members.size());
      while (j < members.size() && Q[members[j]] == Q[members[j - 1]]) ++j;
      chunks.emplace_back(members.begin() + i, members.begin() + j);
      i = j;
    }
    for (auto& chunk : chunks) {
      ParamNode child;
      child.members = std::move(chunk);
      child.interval = hull_of(Q, child.members);
      child.parent = id;
      child.level = tree.nodes_[id].level + 1;
      uint32_t cid = static_cast<uint32_t>(tree.nodes_.size());
      tree.nodes_[id].children.push_back(cid);
      tree.nodes_.push_back(std::move(child));
      work.push_back(cid);
    }
  }
  return tree;
}

int paired_degree_d2(int D1, size_t n, size_t r, size_t s) {
  if (D1 < 1) throw input_error("paired_degree_d2: need D1 >= 1");
  int lo = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(D1))));
  int hi = D1 * D1;
  if (n <= r || n <= s) return lo;
  double expo = std::log(static_cast<double>(n) / static_cast<double>(s)) /
                std::log(static_cast<double>(n) / static_cast<double>(r));
  int d2 = static_cast<int>(std::llround(std::pow(static_cast<double>(D1), expo)));
  return std::clamp(d2, lo, hi);
}

namespace {

// Pairing shared by both product kinds: a side below its bottom keeps itself
// as the sole child, so pairs stay level-synchronized without duplicating
// nodes. Both sides bottom means the pair is bottom.
template <class LeftNodes, class RightNodes>
std::vector<PairId> pair_children(const LeftNodes& ln, const RightNodes& rn, PairId p) {
  const auto& u = ln[p.left];
  const auto& v = rn[p.right];
  if (u.children.empty() && v.children.empty()) return {};
  std::vector<uint32_t> lc = u.children.empty() ? std::vector<uint32_t>{p.left} : u.children;
  std::vector<uint32_t> rc = v.children.empty() ? std::vector<uint32_t>{p.right} : v.children;
  std::vector<PairId> out;
  out.reserve(lc.size() * rc.size());
  for (uint32_t a : lc)
    for (uint32_t b : rc) out.push_back({a, b});
  return out;
}

template <class Tree>
std::vector<PairId> collect_bottom_pairs(const Tree& tree) {
  std::vector<PairId> out, work{{0, 0}};
  while (!work.empty()) {
    PairId p = work.back();
    work.pop_back();
    if (tree.pair_is_bottom(p)) {
      out.push_back(p);
      continue;
    }
    for (PairId c : tree.children_of(p)) work.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool ProductTree22::pair_is_bottom(PairId p) const {
  return left_.node(p.left).children.empty() && right_.node(p.right).children.empty();
}
std::vector<PairId> ProductTree22::children_of(PairId p) const {
  return pair_children(left_.nodes(), right_.nodes(), p);
}
std::vector<PairId> ProductTree22::bottom_pairs() const { return collect_bottom_pairs(*this); }

bool ProductTree21::pair_is_bottom(PairId p) const {
  return planar_.node(p.left).children.empty() && curve_.node(p.right).children.empty();
}
std::vector<PairId> ProductTree21::children_of(PairId p) const {
  return pair_children(planar_.nodes(), curve_.nodes(), p);
}
std::vector<PairId> ProductTree21::bottom_pairs() const { return collect_bottom_pairs(*this); }

ProductTree22 build_product_22(const std::vector<Point2>& P1, const std::vector<Point2>& P2,
                               size_t r, int D, const PartitionProvider& provider, uint64_t seed,
                               SignTestLedger* ledger) {
  size_t n = std::max(P1.size(), P2.size());
  size_t root_n = static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  if (r < 1 || r > root_n) throw input_error("build_product_22: need 1 <= r <= ceil(sqrt(n))");
  PartitionTree left = build_hierarchy(P1, r, D, provider, seed, ledger);
  PartitionTree right = build_hierarchy(P2, r, D, provider, seed + 1, ledger);
  return ProductTree22(std::move(left), std::move(right));
}

ProductTree21 build_product_21(const std::vector<Point2>& P, const std::vector<Rational>& Q,
                               size_t r, size_t s, int D1, const PartitionProvider& provider,
                               uint64_t seed, SignTestLedger* ledger) {
  size_t n = std::max(P.size(), Q.size());
  size_t root_n = static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  if (r < 1 || r > root_n) throw input_error("build_product_21: need 1 <= r <= ceil(sqrt(n))");
  if (s < 1 || s > root_n) throw input_error("build_product_21: need 1 <= s <= ceil(sqrt(n))");
  PartitionTree planar = build_hierarchy(P, r, D1, provider, seed, ledger);
  // Branching chosen so the curve side runs out of slack at the same level
  // the planar side does; paired_degree_d2 reports the matching degree.
  int k = std::max(1, planar.depth());
  double ratio = static_cast<double>(Q.size()) / static_cast<double>(s);
  size_t branching =
      std::max<size_t>(2, static_cast<size_t>(std::ceil(std::pow(std::max(ratio, 1.0), 1.0 / k))));
  ParamTree curve = build_param_tree(Q, s, branching);
  return ProductTree21(std::move(planar), std::move(curve));
}

namespace {

// Box assembly by variable name; unknown names are contract violations.
std::vector<RatInterval> box_for(const MultiPoly& p, const std::array<RatInterval, 2>& lbox,
                                 const std::array<RatInterval, 2>& rbox, bool right_is_param,
                                 const RatInterval& param) {
  std::vector<RatInterval> vals;
  vals.reserve(p.vars().size());
  for (const auto& v : p.vars()) {
    if (v == "x1" || v == "x") vals.push_back(lbox[0]);
    else if (v == "x2" || v == "y") vals.push_back(lbox[1]);
    else if (!right_is_param && (v == "y1" || v == "z1")) vals.push_back(rbox[0]);
    else if (!right_is_param && (v == "y2" || v == "z2")) vals.push_back(rbox[1]);
    else if (right_is_param && (v == "t" || v == "s")) vals.push_back(param);
    else throw input_error("query surface references unknown variable " + v);
  }
  return vals;
}

bool box_tainted(std::span<const RatInterval> box) {
  for (const auto& iv : box)
    if (iv.lo.tainted() || iv.hi.tainted()) return true;
  return false;
}

// True when no defining polynomial certainly excludes zero on the box.
bool surface_may_cross(const QuerySurface& S, const std::array<RatInterval, 2>& lbox,
                       const std::array<RatInterval, 2>& rbox, bool right_is_param,
                       const RatInterval& param, SignTestLedger* ledger, Phase phase) {
  for (const auto& p : S.defining) {
    auto vals = box_for(p, lbox, rbox, right_is_param, param);
    if (ledger && (p.tainted() || box_tainted(vals)))
      ledger->record(phase, p.total_degree(), static_cast<int>(vals.size()));
    if (!p.eval(std::span<const RatInterval>(vals)).contains_zero()) return false;
  }
  return true;
}

template <class Tree, class BoxFn>
std::vector<PairId> reach_by_surface(const Tree& tree, const QuerySurface& S, BoxFn&& crosses,
                                     bool bottom_only) {
  if (S.defining.empty()) throw input_error("query surface needs a defining polynomial");
  std::vector<PairId> out, work;
  if (crosses(PairId{0, 0})) work.push_back({0, 0});
  while (!work.empty()) {
    PairId p = work.back();
    work.pop_back();
    if (!bottom_only || tree.pair_is_bottom(p)) out.push_back(p);
    for (PairId c : tree.children_of(p))
      if (crosses(c)) work.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<PairId> cells_reached_by_surface(const ProductTree22& tree, const QuerySurface& S,
                                             SignTestLedger* ledger, Phase phase,
                                             bool bottom_only) {
  auto crosses = [&](PairId p) {
    return surface_may_cross(S, tree.left().node(p.left).cell.bbox,
                             tree.right().node(p.right).cell.bbox, false, RatInterval(), ledger,
                             phase);
  };
  return reach_by_surface(tree, S, crosses, bottom_only);
}

std::vector<PairId> cells_reached_by_surface(const ProductTree21& tree, const QuerySurface& S,
                                             SignTestLedger* ledger, Phase phase,
                                             bool bottom_only) {
  auto crosses = [&](PairId p) {
    return surface_may_cross(S, tree.planar().node(p.left).cell.bbox, {}, true,
                             tree.curve().node(p.right).interval, ledger, phase);
  };
  return reach_by_surface(tree, S, crosses, bottom_only);
}

ProductCurve ProductCurve::polynomial(std::array<UniPoly, 4> coords) {
  ProductCurve c;
  c.num = std::move(coords);
  for (auto& d : c.den) d = UniPoly::constant(Rational(1));
  return c;
}

namespace {

// Membership of gamma(u) in a closed box, decided coordinate by coordinate.
// sign(num - b*den) * sign(den) orients the bound test independently of the
// denominator's sign; each resolved comparison is one counted test.
struct CurveBoxTest {
  const ProductCurve& curve;
  SignTestLedger* ledger;
  Phase phase;

  void charge(int degree) const {
    if (ledger) ledger->record(phase, std::max(degree, 1), 1);
  }

  bool member_at(const Rational& u, const std::array<RatInterval, 4>& box) const {
    for (int i = 0; i < 4; ++i) {
      Rational dv = curve.den[i].eval(u);
      if (dv.is_zero()) return false;  // pole: not on the curve
      Rational nv = curve.num[i].eval(u);
      int d = std::max(curve.num[i].degree(), curve.den[i].degree());
      charge(d);
      if ((nv - box[i].lo * dv).sign() * dv.sign() < 0) return false;
      charge(d);
      if ((nv - box[i].hi * dv).sign() * dv.sign() > 0) return false;
    }
    return true;
  }

  bool member_at(const RealAlgebraic& u, const std::array<RatInterval, 4>& box) const {
    if (u.is_rational()) return member_at(u.rational_value(), box);
    for (int i = 0; i < 4; ++i) {
      int sden = sign_at(curve.den[i], u);
      if (sden == 0) return false;
      int d = std::max(curve.num[i].degree(), curve.den[i].degree());
      charge(d);
      if (sign_at(curve.num[i] - curve.den[i].scaled(box[i].lo), u) * sden < 0) return false;
      charge(d);
      if (sign_at(curve.num[i] - curve.den[i].scaled(box[i].hi), u) * sden > 0) return false;
    }
    return true;
  }

  // Curve meets the box iff some boundary-crossing arc sample or crossing
  // point itself lies inside; crossings are roots of num - b*den and poles.
  bool meets(const std::array<RatInterval, 4>& box) const {
    std::vector<RealAlgebraic> cuts;
    auto add_roots = [&](const UniPoly& p) {
      if (p.degree() < 1) return;
      for (auto& rt : real_roots_distinct(p)) cuts.push_back(std::move(rt));
    };
    for (int i = 0; i < 4; ++i) {
      add_roots(curve.num[i] - curve.den[i].scaled(box[i].lo));
      add_roots(curve.num[i] - curve.den[i].scaled(box[i].hi));
      add_roots(curve.den[i]);
    }
    if (cuts.empty()) return member_at(Rational(0), box);

    std::sort(cuts.begin(), cuts.end(), [&](const RealAlgebraic& a, const RealAlgebraic& b) {
      int c = RealAlgebraic::cmp(a, b);
      charge(2);
      return c < 0;
    });
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](const RealAlgebraic& a, const RealAlgebraic& b) {
                             charge(2);
                             return RealAlgebraic::cmp(a, b) == 0;
                           }),
               cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      while (cuts[i].hi() > cuts[i + 1].lo()) {
        cuts[i].refine();
        cuts[i + 1].refine();
      }
    }
    for (const auto& c : cuts)
      if (member_at(c, box)) return true;
    if (member_at(cuts.front().lo() - Rational(1), box)) return true;
    if (member_at(cuts.back().hi() + Rational(1), box)) return true;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
      if (member_at(Rational::mid(cuts[i].hi(), cuts[i + 1].lo()), box)) return true;
    return false;
  }
};

}  // namespace

std::vector<PairId> cells_reached_by_curve_22(const ProductTree22& tree, const ProductCurve& curve,
                                              SignTestLedger* ledger, Phase phase) {
  CurveBoxTest test{curve, ledger, phase};
  auto crosses = [&](PairId p) {
    const auto& lb = tree.left().node(p.left).cell.bbox;
    const auto& rb = tree.right().node(p.right).cell.bbox;
    return test.meets({lb[0], lb[1], rb[0], rb[1]});
  };
  std::vector<PairId> out, work;
  if (crosses(PairId{0, 0})) work.push_back({0, 0});
  while (!work.empty()) {
    PairId p = work.back();
    work.pop_back();
    out.push_back(p);
    for (PairId c : tree.children_of(p))
      if (crosses(c)) work.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string crossing_report_json(const ProductTree21& tree, const std::vector<PairId>& reached,
                                 int indent) {
  std::map<int, size_t> per_level;
  size_t bottoms = 0;
  for (PairId p : reached) {
    int level = std::max(tree.planar().node(p.left).level, tree.curve().node(p.right).level);
    ++per_level[level];
    if (tree.pair_is_bottom(p)) ++bottoms;
  }
  nlohmann::json levels = nlohmann::json::object();
  for (auto [lvl, count] : per_level) levels[std::to_string(lvl)] = count;
  nlohmann::json doc{{"total", reached.size()}, {"bottom", bottoms}, {"levels", levels}};
  return doc.dump(indent);
}

}  // namespace trivar
