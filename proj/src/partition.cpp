#include "partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace trivar {

bool PlanarCell::has_zero_sign() const {
  return std::any_of(sign_vector.begin(), sign_vector.end(), [](int s) { return s == 0; });
}

namespace {

Rational eval_xy(const MultiPoly& f, const Point2& p) {
  std::vector<Rational> pt{p[0], p[1]};
  return f.eval(pt);
}

bool all_identical(const std::vector<Point2>& pts, const std::vector<size_t>& subset) {
  for (size_t i = 1; i < subset.size(); ++i)
    if (!(pts[subset[i]][0] == pts[subset[0]][0] && pts[subset[i]][1] == pts[subset[0]][1]))
      return false;
  return true;
}

// Bisecting line for one class: x = median x, falling back to y, falling
// back to a line through the (identical) point so it zero-routes to arcs.
MultiPoly median_line(const std::vector<Point2>& pts, const std::vector<size_t>& cls) {
  for (size_t axis : {size_t{0}, size_t{1}}) {
    std::vector<Rational> vals;
    vals.reserve(cls.size());
    for (size_t i : cls) vals.push_back(pts[i][axis]);
    std::sort(vals.begin(), vals.end());
    if (vals.front() == vals.back()) {
      if (axis == 1) {
        // All points identical: place the factor through the point.
        return MultiPoly::var(xyvars(), "x") - MultiPoly::constant(xyvars(), vals.front());
      }
      continue;
    }
    Rational med = vals[vals.size() / 2];
    const char* name = axis == 0 ? "x" : "y";
    return MultiPoly::var(xyvars(), name) - MultiPoly::constant(xyvars(), med);
  }
  return MultiPoly(xyvars());  // unreachable
}

// Degree-2 shape c1 x^2 + c2 xy + c3 y^2 + c4 x + c5 y (offset chosen later).
struct Shape {
  std::array<int, 5> c;
  bool is_zero() const { return c == std::array<int, 5>{0, 0, 0, 0, 0}; }
};

double shape_key(const Shape& sh, const Point2& p) {
  double x = p[0].to_double(), y = p[1].to_double();
  return sh.c[0] * x * x + sh.c[1] * x * y + sh.c[2] * y * y + sh.c[3] * x + sh.c[4] * y;
}

MultiPoly shape_poly(const Shape& sh, double offset_hint) {
  auto v = [](const char* n, unsigned pw = 1) { return MultiPoly::var(xyvars(), n, pw); };
  MultiPoly f = MultiPoly(xyvars());
  if (sh.c[0]) f = f + v("x", 2).scaled(Rational(sh.c[0]));
  if (sh.c[1]) f = f + (v("x") * v("y")).scaled(Rational(sh.c[1]));
  if (sh.c[2]) f = f + v("y", 2).scaled(Rational(sh.c[2]));
  if (sh.c[3]) f = f + v("x").scaled(Rational(sh.c[3]));
  if (sh.c[4]) f = f + v("y").scaled(Rational(sh.c[4]));
  // Dyadic snap keeps coefficients small and reproducible.
  double scaled = std::ldexp(offset_hint, 20);
  if (!std::isfinite(scaled)) scaled = 0;
  long long num = static_cast<long long>(std::llround(scaled));
  mpz_class den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), 20);
  return f - MultiPoly::constant(xyvars(), Rational(mpz_class(static_cast<long>(num)), den));
}

// Score a cut against the overloaded classes: the worst one-side count.
// Float keys only steer the search; the builder re-verifies exactly.
struct ScoredCut {
  double offset = 0;
  size_t score = SIZE_MAX;
};

ScoredCut best_offset(const std::vector<std::vector<double>>& class_keys) {
  // Candidate offsets: per-class medians. Evaluate each candidate on all
  // classes by binary search over the sorted key lists.
  std::vector<double> candidates;
  for (const auto& keys : class_keys) {
    size_t k = keys.size();
    candidates.push_back(keys[k / 2]);
    if (k >= 2) candidates.push_back((keys[k / 2 - 1] + keys[k / 2]) / 2);
  }
  ScoredCut best;
  for (double c : candidates) {
    if (!std::isfinite(c)) continue;
    size_t score = 0;
    for (const auto& keys : class_keys) {
      size_t below = static_cast<size_t>(std::lower_bound(keys.begin(), keys.end(), c) - keys.begin());
      size_t above = keys.size() - static_cast<size_t>(std::upper_bound(keys.begin(), keys.end(), c) - keys.begin());
      score = std::max({score, below, above});
    }
    if (score < best.score) best = {c, score};
  }
  return best;
}

MultiPoly best_conic(const std::vector<Point2>& pts,
                     const std::vector<std::vector<size_t>>& classes, SplitMix64& rng) {
  std::vector<Shape> shapes = {
      {{0, 0, 0, 1, 0}}, {{0, 0, 0, 0, 1}}, {{1, 0, 1, 0, 0}},
      {{1, 0, -1, 0, 0}}, {{0, 1, 0, 0, 0}}, {{1, 0, 0, 0, 1}},
  };
  for (int i = 0; i < 28; ++i) {
    Shape sh{};
    for (auto& c : sh.c) c = static_cast<int>(rng.uniform(-3, 3));
    if (!sh.is_zero()) shapes.push_back(sh);
  }

  Shape best_shape = shapes[0];
  ScoredCut best_cut;
  auto consider = [&](const Shape& sh) {
    std::vector<std::vector<double>> class_keys;
    class_keys.reserve(classes.size());
    for (const auto& cls : classes) {
      std::vector<double> keys;
      keys.reserve(cls.size());
      for (size_t i : cls) keys.push_back(shape_key(sh, pts[i]));
      std::sort(keys.begin(), keys.end());
      class_keys.push_back(std::move(keys));
    }
    ScoredCut cut = best_offset(class_keys);
    if (cut.score < best_cut.score) {
      best_cut = cut;
      best_shape = sh;
    }
  };
  for (const auto& sh : shapes) consider(sh);
  for (int round = 0; round < 8; ++round) {  // local mutations around the leader
    Shape sh = best_shape;
    size_t at = static_cast<size_t>(rng.uniform(0, 4));
    sh.c[at] += static_cast<int>(rng.uniform(0, 1)) * 2 - 1;
    if (!sh.is_zero()) consider(sh);
  }
  return shape_poly(best_shape, best_cut.offset);
}

struct HamSandwichProvider final : PartitionProvider {
  std::string name() const override { return "iterated-ham-sandwich"; }
  bool strict() const override { return true; }
  std::vector<MultiPoly> propose(const std::vector<Point2>& pts, const std::vector<size_t>& subset,
                                 int D, size_t target, SplitMix64& rng,
                                 SignTestLedger* ledger) const override {
    std::vector<MultiPoly> factors;
    int degree_budget = 4 * std::max(D, 1);
    std::vector<std::vector<size_t>> classes{subset};
    int used = 0;
    while (used < degree_budget) {
      std::vector<std::vector<size_t>> overloaded;
      for (auto& cls : classes)
        if (cls.size() > target && !all_identical(pts, cls)) overloaded.push_back(cls);
      if (overloaded.empty()) {
        // Zero-route identical heavy classes so they become arc cells.
        bool placed = false;
        for (auto& cls : classes)
          if (cls.size() > target && all_identical(pts, cls)) {
            factors.push_back(median_line(pts, cls));
            used += 1;
            placed = true;
            cls.clear();
          }
        if (!placed) break;
      } else {
        MultiPoly f = overloaded.size() == 1 ? median_line(pts, overloaded[0])
                                             : best_conic(pts, overloaded, rng);
        used += std::max(f.total_degree(), 1);
        factors.push_back(std::move(f));
      }
      if (factors.empty()) break;
      // Re-split classes by the new factor; zero-sign points leave the pool
      // (the builder routes them to arc cells).
      const MultiPoly& f = factors.back();
      std::vector<std::vector<size_t>> next;
      for (auto& cls : classes) {
        std::vector<size_t> neg, pos;
        for (size_t i : cls) {
          if (ledger) ledger->record(Phase::partition_build, f.total_degree(), 2);
          int s = eval_xy(f, pts[i]).sign();
          if (s < 0) neg.push_back(i);
          else if (s > 0) pos.push_back(i);
        }
        if (!neg.empty()) next.push_back(std::move(neg));
        if (!pos.empty()) next.push_back(std::move(pos));
      }
      classes = std::move(next);
      bool any_over = std::any_of(classes.begin(), classes.end(),
                                  [&](const auto& c) { return c.size() > target; });
      if (!any_over) break;
    }
    return factors;
  }
};

struct QuantileProvider final : PartitionProvider {
  std::string name() const override { return "quantile-lines"; }
  bool strict() const override { return false; }
  std::vector<MultiPoly> propose(const std::vector<Point2>& pts, const std::vector<size_t>& subset,
                                 int D, size_t, SplitMix64&, SignTestLedger*) const override {
    std::vector<MultiPoly> factors;
    for (size_t axis : {size_t{0}, size_t{1}}) {
      std::vector<Rational> vals;
      vals.reserve(subset.size());
      for (size_t i : subset) vals.push_back(pts[i][axis]);
      std::sort(vals.begin(), vals.end());
      const char* name = axis == 0 ? "x" : "y";
      for (int k = 1; k <= D; ++k) {
        size_t at = std::min(vals.size() - 1, subset.size() * static_cast<size_t>(k) / (static_cast<size_t>(D) + 1));
        Rational cut = vals[at];
        if (at + 1 < vals.size() && !(vals[at] == vals[at + 1]))
          cut = Rational::mid(vals[at], vals[at + 1]);
        MultiPoly f = MultiPoly::var(xyvars(), name) - MultiPoly::constant(xyvars(), cut);
        if (std::none_of(factors.begin(), factors.end(), [&](const MultiPoly& g) { return g == f; }))
          factors.push_back(std::move(f));
      }
    }
    return factors;
  }
};

}  // namespace

const PartitionProvider& ham_sandwich_provider() {
  static const HamSandwichProvider p;
  return p;
}

const PartitionProvider& quantile_provider() {
  static const QuantileProvider p;
  return p;
}

const PartitionProvider& provider_by_name(const std::string& name) {
  if (name == "iterated-ham-sandwich" || name == "default") return ham_sandwich_provider();
  if (name == "quantile-lines") return quantile_provider();
  throw input_error("unknown partition provider \"" + name + "\"");
}

namespace {

std::array<RatInterval, 2> bbox_of(const std::vector<Point2>& pts, const std::vector<size_t>& idx) {
  RatInterval bx(pts[idx[0]][0], pts[idx[0]][0]);
  RatInterval by(pts[idx[0]][1], pts[idx[0]][1]);
  for (size_t k = 1; k < idx.size(); ++k) {
    bx = RatInterval::hull(bx, RatInterval(pts[idx[k]][0], pts[idx[k]][0]));
    by = RatInterval::hull(by, RatInterval(pts[idx[k]][1], pts[idx[k]][1]));
  }
  return {bx, by};
}

// Split a zero-sign class into lex-contiguous chunks of <= target points,
// never separating copies of the same point.
std::vector<std::vector<size_t>> arc_chunks(const std::vector<Point2>& pts,
                                            std::vector<size_t> members, size_t target) {
  std::sort(members.begin(), members.end(), [&](size_t a, size_t b) {
    int c = Rational::cmp(pts[a][0], pts[b][0]);
    if (c != 0) return c < 0;
    return Rational::cmp(pts[a][1], pts[b][1]) < 0;
  });
  std::vector<std::vector<size_t>> chunks;
  size_t i = 0;
  while (i < members.size()) {
    size_t j = i + 1;  // run of identical points
    while (j < members.size() && pts[members[j]][0] == pts[members[i]][0] &&
           pts[members[j]][1] == pts[members[i]][1])
      ++j;
    size_t run = j - i;
    if (chunks.empty() || chunks.back().size() + run > target)
      chunks.emplace_back();
    chunks.back().insert(chunks.back().end(), members.begin() + static_cast<long>(i),
                         members.begin() + static_cast<long>(j));
    i = j;
  }
  return chunks;
}

}  // namespace

PartitionResult build_partition(const std::vector<Point2>& pts, const std::vector<size_t>& subset,
                                int D, const PartitionProvider& provider, SplitMix64& rng,
                                SignTestLedger* ledger) {
  if (subset.empty()) throw input_error("build_partition: empty point set");
  if (D < 1) throw input_error("build_partition: D must be >= 1");
  size_t dsq = static_cast<size_t>(D) * static_cast<size_t>(D);
  size_t target = (subset.size() + dsq - 1) / dsq;

  PartitionResult res;
  res.target_load = target;
  res.factors = provider.propose(pts, subset, D, target, rng, ledger);
  for (auto& f : res.factors) f.mark_tainted();

  const int kRetryCap = 8;
  std::map<std::vector<int>, std::vector<size_t>> classes;
  for (int attempt = 0;; ++attempt) {
    classes.clear();
    for (size_t i : subset) {
      std::vector<int> sv;
      sv.reserve(res.factors.size());
      for (const auto& f : res.factors) {
        if (ledger) ledger->record(Phase::partition_build, f.total_degree(), 2);
        sv.push_back(eval_xy(f, pts[i]).sign());
      }
      classes[sv].push_back(i);
    }
    // Find the worst splittable nonzero-sign violation.
    const std::vector<size_t>* worst = nullptr;
    for (const auto& [sv, members] : classes) {
      bool zero = std::any_of(sv.begin(), sv.end(), [](int s) { return s == 0; });
      if (zero) continue;  // arc cells handle these below
      if (members.size() > target && !all_identical(pts, members))
        if (!worst || members.size() > worst->size()) worst = &members;
    }
    if (!worst) break;
    if (attempt >= kRetryCap) {
      if (provider.strict())
        throw budget_error("partition retry cap exceeded; worst cell holds " +
                           std::to_string(worst->size()) + " of target " + std::to_string(target));
      res.bounds_ok = false;
      break;
    }
    MultiPoly patch = median_line(pts, *worst);
    patch.mark_tainted();
    res.factors.push_back(std::move(patch));
    res.retries_used = attempt + 1;
  }

  res.total_degree = 0;
  for (const auto& f : res.factors) res.total_degree += f.total_degree();

  for (auto& [sv, members] : classes) {
    bool zero = std::any_of(sv.begin(), sv.end(), [](int s) { return s == 0; });
    auto add_cell = [&](std::vector<size_t> assoc, int arc_id) {
      PlanarCell cell;
      cell.sign_vector = sv;
      cell.arc_id = arc_id;
      cell.associated = std::move(assoc);
      cell.reference_point = pts[cell.associated[0]];
      cell.bbox = bbox_of(pts, cell.associated);
      res.worst_load = std::max(res.worst_load, cell.associated.size());
      if (cell.associated.size() > target && !all_identical(pts, cell.associated))
        res.bounds_ok = false;
      res.cells.push_back(std::move(cell));
    };
    if (!zero) {
      add_cell(std::move(members), -1);
    } else {
      auto chunks = arc_chunks(pts, std::move(members), target);
      for (size_t k = 0; k < chunks.size(); ++k) add_cell(std::move(chunks[k]), static_cast<int>(k));
    }
  }
  return res;
}

std::vector<CurveArc> partition_curve_points(const std::vector<Rational>& Q, int target) {
  if (Q.empty()) return {};
  if (target < 1) throw input_error("partition_curve_points: target must be >= 1");
  size_t tsq = static_cast<size_t>(target) * static_cast<size_t>(target);
  size_t bound = (Q.size() + tsq - 1) / tsq;

  std::vector<size_t> order(Q.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return Q[a] < Q[b]; });

  std::vector<CurveArc> arcs;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i + 1;
    while (j < order.size() && Q[order[j]] == Q[order[i]]) ++j;  // multiplicity run
    size_t run = j - i;
    if (arcs.empty() || arcs.back().members.size() + run > bound) {
      CurveArc arc;
      if (!arcs.empty()) {
        // Cut strictly between the previous value and this one.
        Rational cut = Rational::mid(Q[arcs.back().members.back()], Q[order[i]]);
        arcs.back().hi = cut;
        arc.lo = cut;
      }
      arcs.push_back(std::move(arc));
    }
    arcs.back().members.insert(arcs.back().members.end(), order.begin() + static_cast<long>(i),
                               order.begin() + static_cast<long>(j));
    i = j;
  }
  return arcs;
}

int PartitionTree::depth() const {
  int d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.level);
  return d;
}

std::vector<uint32_t> PartitionTree::bottom_nodes() const {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].bottom) out.push_back(i);
  return out;
}

std::string PartitionTree::stats_json(int indent) const {
  nlohmann::json levels = nlohmann::json::array();
  int depth_max = depth();
  for (int lv = 0; lv <= depth_max; ++lv) {
    size_t count = 0, max_load = 0, bottoms = 0;
    int max_degree = 0;
    for (const auto& n : nodes_)
      if (n.level == lv) {
        ++count;
        max_load = std::max(max_load, n.cell.associated.size());
        max_degree = std::max(max_degree, n.total_degree);
        if (n.bottom) ++bottoms;
      }
    levels.push_back({{"level", lv},
                      {"nodes", count},
                      {"max_load", max_load},
                      {"bottom_nodes", bottoms},
                      {"max_factor_degree_sum", max_degree}});
  }
  int worst_degree = 0;
  for (const auto& n : nodes_) worst_degree = std::max(worst_degree, n.total_degree);
  nlohmann::json j = {
      {"r", r_},
      {"D", D_},
      {"provider", provider_},
      {"bounds_ok", bounds_ok_},
      {"nodes_total", nodes_.size()},
      {"depth", depth_max},
      {"realized_degree_constant", D_ > 0 ? static_cast<double>(worst_degree) / D_ : 0.0},
      {"levels", std::move(levels)},
  };
  return j.dump(indent);
}

PartitionTree build_hierarchy(const std::vector<Point2>& pts, size_t r, int D,
                              const PartitionProvider& provider, uint64_t seed,
                              SignTestLedger* ledger) {
  if (pts.empty()) throw input_error("build_hierarchy: empty point set");
  if (r < 1 || r > pts.size()) throw input_error("build_hierarchy: need 1 <= r <= n");
  PartitionTree tree;
  tree.pts_ = pts;
  tree.r_ = r;
  tree.D_ = D;
  tree.provider_ = provider.name();

  SplitMix64 root_rng(seed);
  PartitionNode root;
  root.cell.associated.resize(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) root.cell.associated[i] = i;
  root.cell.reference_point = pts[0];
  root.cell.bbox = bbox_of(pts, root.cell.associated);
  tree.nodes_.push_back(std::move(root));

  std::vector<uint32_t> work{0};
  while (!work.empty()) {
    uint32_t id = work.back();
    work.pop_back();
    if (tree.nodes_[id].level > 64) throw internal_error("partition hierarchy too deep");
    const auto& assoc = tree.nodes_[id].cell.associated;
    if (assoc.size() <= r) {
      tree.nodes_[id].bottom = true;
      continue;
    }
    if (all_identical(pts, assoc)) {
      tree.nodes_[id].bottom = true;
      tree.nodes_[id].unsplittable = true;
      continue;
    }
    SplitMix64 rng = root_rng.derive(id);
    PartitionResult res = build_partition(pts, assoc, D, provider, rng, ledger);
    tree.bounds_ok_ = tree.bounds_ok_ && res.bounds_ok;
    tree.nodes_[id].factors = std::move(res.factors);
    tree.nodes_[id].total_degree = res.total_degree;
    for (auto& cell : res.cells) {
      PartitionNode child;
      child.cell = std::move(cell);
      child.parent = id;
      child.level = tree.nodes_[id].level + 1;
      tree.nodes_.push_back(std::move(child));
      uint32_t cid = static_cast<uint32_t>(tree.nodes_.size() - 1);
      tree.nodes_[id].children.push_back(cid);
      work.push_back(cid);
    }
  }
  return tree;
}

namespace {

// F(x(t), y(t)) with denominators cleared by even powers.
UniPoly compose_factor(const MultiPoly& f, const ParamCurve& curve) {
  int dx = std::max(f.degree(0), 0), dy = std::max(f.degree(1), 0);
  int ex = dx % 2 == 0 ? dx : dx + 1, ey = dy % 2 == 0 ? dy : dy + 1;
  std::vector<UniPoly> xn{UniPoly::constant(Rational(1))}, xd{UniPoly::constant(Rational(1))},
      yn{UniPoly::constant(Rational(1))}, yd{UniPoly::constant(Rational(1))};
  for (int i = 1; i <= dx; ++i) xn.push_back(xn.back() * curve.x_num());
  for (int i = 1; i <= ex; ++i) xd.push_back(xd.back() * curve.x_den());
  for (int i = 1; i <= dy; ++i) yn.push_back(yn.back() * curve.y_num());
  for (int i = 1; i <= ey; ++i) yd.push_back(yd.back() * curve.y_den());
  UniPoly out;
  for (const auto& term : f.terms()) {
    unsigned a = term.exps[0], b = term.exps[1];
    UniPoly piece = xn[a] * xd[static_cast<size_t>(ex) - a] * yn[b] * yd[static_cast<size_t>(ey) - b];
    out = out + piece.scaled(term.coef);
  }
  return out;
}

struct CurveTrace {
  std::vector<UniPoly> composed;           // per factor
  std::vector<RealAlgebraic> cuts;         // sorted, distinct
  std::vector<Rational> samples;           // one per open arc
};

CurveTrace trace_curve(const std::vector<MultiPoly>& factors, const ParamCurve& curve,
                       SignTestLedger* ledger, Phase phase) {
  CurveTrace tr;
  for (const auto& f : factors) tr.composed.push_back(compose_factor(f, curve));
  for (const auto& g : tr.composed) {
    if (g.is_zero() || g.degree() == 0) continue;
    for (auto& rt : real_roots_distinct(g)) tr.cuts.push_back(std::move(rt));
  }
  std::sort(tr.cuts.begin(), tr.cuts.end(), [&](const RealAlgebraic& a, const RealAlgebraic& b) {
    if (ledger) ledger->record(phase, std::max(a.defining().degree(), b.defining().degree()), 1);
    return RealAlgebraic::cmp(a, b) < 0;
  });
  tr.cuts.erase(std::unique(tr.cuts.begin(), tr.cuts.end(),
                            [&](const RealAlgebraic& a, const RealAlgebraic& b) {
                              if (ledger)
                                ledger->record(phase, std::max(a.defining().degree(), b.defining().degree()), 1);
                              return RealAlgebraic::cmp(a, b) == 0;
                            }),
                tr.cuts.end());

  if (tr.cuts.empty()) {
    tr.samples.push_back(Rational(0));
    return tr;
  }
  // Separate neighboring isolating intervals, then take rational midpoints.
  for (size_t i = 0; i + 1 < tr.cuts.size(); ++i) {
    while (!(tr.cuts[i].hi() <= tr.cuts[i + 1].lo())) {
      tr.cuts[i].refine();
      tr.cuts[i + 1].refine();
    }
  }
  tr.samples.push_back(tr.cuts.front().lo() - Rational(1));
  for (size_t i = 0; i + 1 < tr.cuts.size(); ++i)
    tr.samples.push_back(Rational::mid(tr.cuts[i].hi(), tr.cuts[i + 1].lo()));
  tr.samples.push_back(tr.cuts.back().hi() + Rational(1));
  return tr;
}

}  // namespace

std::vector<uint32_t> cells_reached_by_curve(const PartitionTree& tree, const ParamCurve& curve,
                                             SignTestLedger* ledger, Phase phase) {
  std::vector<uint32_t> out;
  std::vector<uint32_t> work{0};
  while (!work.empty()) {
    uint32_t id = work.back();
    work.pop_back();
    out.push_back(id);
    const PartitionNode& node = tree.node(id);
    if (node.children.empty()) continue;

    CurveTrace tr = trace_curve(node.factors, curve, ledger, phase);
    std::set<std::vector<int>> met;
    std::vector<int> sv(node.factors.size());
    for (const auto& sample : tr.samples) {
      for (size_t i = 0; i < tr.composed.size(); ++i) {
        if (ledger) ledger->record(phase, std::max(tr.composed[i].degree(), 0), 1);
        sv[i] = tr.composed[i].sign_at(sample);
      }
      met.insert(sv);
    }
    for (const auto& cut : tr.cuts) {
      for (size_t i = 0; i < tr.composed.size(); ++i) {
        if (ledger) ledger->record(phase, std::max(tr.composed[i].degree(), 0), 1);
        sv[i] = tr.composed[i].is_zero() ? 0 : sign_at(tr.composed[i], cut);
      }
      met.insert(sv);
    }
    for (uint32_t cid : node.children)
      if (met.count(tree.node(cid).cell.sign_vector)) work.push_back(cid);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace trivar
