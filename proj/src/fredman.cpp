#include "fredman.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include <nlohmann/json.hpp>

namespace trivar {

PLConfig solve_parameters(long M, long N) {
  if (M < 1 || N < 1) throw input_error("solve_parameters: need M, N >= 1");
  mpz_class m(M), n(N);
  if (m * m < n || n * n * n * n < m)
    throw input_error("solve_parameters: validity needs M^2 >= N and N^4 >= M");

  auto root7 = [](const mpz_class& v) {
    mpz_class r;
    mpz_root(r.get_mpz_t(), v.get_mpz_t(), 7);
    return r.get_si();
  };
  PLConfig cfg;
  cfg.r1j = root7(m * m / n);
  cfg.r2j = root7(n * n * n * n / m);
  double prod_n = std::pow(static_cast<double>(cfg.r1j), 1) * std::pow(cfg.r2j, 2);
  double prod_m = std::pow(static_cast<double>(cfg.r1j), 4) * std::pow(cfg.r2j, 1);
  cfg.residual_n = std::abs(prod_n - static_cast<double>(N)) / static_cast<double>(N);
  cfg.residual_m = std::abs(prod_m - static_cast<double>(M)) / static_cast<double>(M);
  return cfg;
}

std::string LocateStats::to_json(int indent) const {
  nlohmann::json j{{"blocks", blocks},
                   {"vertex_mass", vertex_mass},
                   {"covered_pairs", covered_pairs},
                   {"direct_pairs", direct_pairs},
                   {"direct_fraction",
                    covered_pairs ? static_cast<double>(direct_pairs) / covered_pairs : 0.0},
                   {"max_depth", max_depth},
                   {"splits_point_side", splits_point_side},
                   {"splits_surface_side", splits_surface_side}};
  return j.dump(indent);
}

namespace {

std::vector<FloatInterval> item_box(const PLItem& it) {
  std::vector<FloatInterval> box;
  box.reserve(it.coords.size());
  for (const auto& c : it.coords) box.push_back(FloatInterval::of(c));
  return box;
}

std::vector<FloatInterval> hull_box(const std::vector<PLItem>& items,
                                    const std::vector<uint32_t>& idx) {
  std::vector<FloatInterval> box = item_box(items[idx[0]]);
  for (size_t k = 1; k < idx.size(); ++k) {
    const auto& c = items[idx[k]].coords;
    for (size_t d = 0; d < box.size(); ++d) {
      FloatInterval v = FloatInterval::of(c[d]);
      box[d].lo = std::min(box[d].lo, v.lo);
      box[d].hi = std::max(box[d].hi, v.hi);
    }
  }
  return box;
}

struct Engine {
  const std::vector<PLItem>& pts;
  const std::vector<PLItem>& surs;
  const IncidenceFamily& F;
  const PLConfig& cfg;
  SignTestLedger* ledger;
  LocateStats* stats;
  SplitMix64 rng_root;
  uint64_t node_counter = 0;
  std::vector<BipartiteBlock> out;

  void charge_eval(Phase ph) const {
    if (ledger) ledger->record(ph, F.degree, F.arity);
  }
  void charge_cmp(Phase ph, uint64_t times = 1) const {
    if (ledger) ledger->record(ph, 1, 1, times);
  }
  int exact(uint32_t pi, uint32_t si, Phase ph) const {
    charge_eval(ph);
    return F.sign_exact(pts[pi], surs[si]);
  }

  // Directly resolved pairs still leave as blocks so lookups stay complete,
  // but they count under direct_pairs, not covered_pairs.
  void emit(BipartiteBlock blk, bool certified = true) {
    if (stats) {
      stats->blocks += 1;
      stats->vertex_mass += blk.points.size() + blk.surfaces.size();
      if (certified) stats->covered_pairs += blk.points.size() * blk.surfaces.size();
    }
    out.push_back(std::move(blk));
  }

  void direct(const std::vector<uint32_t>& P, const std::vector<uint32_t>& S) {
    for (uint32_t si : S) {
      std::array<std::vector<uint32_t>, 3> groups;
      for (uint32_t pi : P) {
        int s = exact(pi, si, Phase::fredman_primal);
        groups[static_cast<size_t>(s + 1)].push_back(pts[pi].id);
      }
      for (int g = 0; g < 3; ++g) {
        if (groups[static_cast<size_t>(g)].empty()) continue;
        emit({groups[static_cast<size_t>(g)], {surs[si].id}, {static_cast<int8_t>(g - 1)}}, false);
      }
    }
    if (stats) stats->direct_pairs += P.size() * S.size();
  }

  // One comparison against the pivot value per item; both partitions come
  // from the same trichotomy. nullopt when the side has identical coords.
  std::optional<std::pair<std::vector<uint32_t>, std::vector<uint32_t>>> split_side(
      const std::vector<PLItem>& items, const std::vector<uint32_t>& idx, Phase ph) {
    size_t dims = items[idx[0]].coords.size();
    std::vector<size_t> order(dims);
    for (size_t d = 0; d < dims; ++d) order[d] = d;
    auto fbox = hull_box(items, idx);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return fbox[a].hi - fbox[a].lo > fbox[b].hi - fbox[b].lo; });

    for (size_t d : order) {
      // Float median picks the pivot value; exact comparisons place items.
      std::vector<uint32_t> tmp = idx;
      auto mid = tmp.begin() + static_cast<long>(tmp.size() / 2);
      std::nth_element(tmp.begin(), mid, tmp.end(), [&](uint32_t a, uint32_t b) {
        return items[a].coords[d].to_double() < items[b].coords[d].to_double();
      });
      Rational pivot = items[*mid].coords[d];
      std::vector<uint32_t> lt, eq, gt;
      for (uint32_t i : idx) {
        charge_cmp(ph);
        int c = Rational::cmp(items[i].coords[d], pivot);
        (c < 0 ? lt : c > 0 ? gt : eq).push_back(i);
      }
      if (lt.empty() && gt.empty()) continue;
      if (!lt.empty() && !(eq.empty() && gt.empty())) {
        std::vector<uint32_t> rest = std::move(eq);
        rest.insert(rest.end(), gt.begin(), gt.end());
        return std::make_pair(std::move(lt), std::move(rest));
      }
      std::vector<uint32_t> low = std::move(lt);
      low.insert(low.end(), eq.begin(), eq.end());
      return std::make_pair(std::move(low), std::move(gt));
    }
    return std::nullopt;
  }

  // Interval-nominated block confirmed by exact evaluation at one
  // representative pair plus kappa random spot samples. Zero or mismatch
  // rejects the whole block back into the undecided pool.
  bool confirm_block(int want, const std::vector<uint32_t>& P, const std::vector<uint32_t>& S,
                     Phase ph, SplitMix64& rng) {
    if (exact(P[0], S[0], ph) != want) return false;
    for (int k = 0; k < cfg.kappa; ++k) {
      uint32_t pi = P[rng.uniform(0, P.size() - 1)];
      uint32_t si = S[rng.uniform(0, S.size() - 1)];
      if (exact(pi, si, ph) != want) return false;
    }
    return true;
  }

  void recurse(std::vector<uint32_t> P, std::vector<uint32_t> S, int depth) {
    if (P.empty() || S.empty()) return;
    if (stats) stats->max_depth = std::max(stats->max_depth, depth);
    SplitMix64 rng = rng_root.derive(node_counter++);

    // Surfaces whose sign is determined over the whole point box. Interval
    // tests steer and are free; emitted blocks pay the representative and
    // spot-check evaluations.
    auto boxP = hull_box(pts, P);
    std::array<std::vector<uint32_t>, 2> decided;  // by sign: [0] -1, [1] +1
    std::vector<uint32_t> srem;
    for (uint32_t si : S) {
      int sgn = F.range(boxP, item_box(surs[si])).determined_sign();
      if (sgn != 0)
        decided[static_cast<size_t>((sgn + 1) / 2)].push_back(si);
      else
        srem.push_back(si);
    }
    for (int g = 0; g < 2; ++g) {
      auto& bucket = decided[static_cast<size_t>(g)];
      if (bucket.empty()) continue;
      int want = g == 0 ? -1 : 1;
      if (!confirm_block(want, P, bucket, Phase::fredman_primal, rng)) {
        srem.insert(srem.end(), bucket.begin(), bucket.end());
        continue;
      }
      BipartiteBlock blk;
      blk.points.reserve(P.size());
      for (uint32_t pi : P) blk.points.push_back(pts[pi].id);
      blk.surfaces.reserve(bucket.size());
      for (uint32_t si : bucket) blk.surfaces.push_back(surs[si].id);
      blk.signs.assign(bucket.size(), static_cast<int8_t>(want));
      emit(std::move(blk));
    }
    if (srem.empty()) return;

    // Points determined against the remaining surfaces' dual box.
    auto boxS = hull_box(surs, srem);
    std::vector<uint32_t> prem;
    for (uint32_t pi : P) {
      int sgn = F.range(item_box(pts[pi]), boxS).determined_sign();
      std::vector<uint32_t> self{pi};
      if (sgn != 0 && confirm_block(sgn, self, srem, Phase::fredman_dual, rng)) {
        BipartiteBlock one;
        one.points = {pts[pi].id};
        one.surfaces.reserve(srem.size());
        for (uint32_t si : srem) one.surfaces.push_back(surs[si].id);
        one.signs.assign(srem.size(), static_cast<int8_t>(sgn));
        emit(std::move(one));
      } else {
        prem.push_back(pi);
      }
    }
    if (prem.empty()) return;

    if (prem.size() * srem.size() <= cfg.leaf_cap || depth >= cfg.depth_cap) {
      direct(prem, srem);
      return;
    }

    bool point_side = prem.size() >= srem.size();
    auto split = point_side ? split_side(pts, prem, Phase::fredman_primal)
                            : split_side(surs, srem, Phase::fredman_dual);
    if (!split) {
      point_side = !point_side;
      split = point_side ? split_side(pts, prem, Phase::fredman_primal)
                         : split_side(surs, srem, Phase::fredman_dual);
    }
    if (!split) {
      direct(prem, srem);  // both sides degenerate
      return;
    }
    if (stats) (point_side ? stats->splits_point_side : stats->splits_surface_side) += 1;
    if (point_side) {
      recurse(split->first, srem, depth + 1);
      recurse(std::move(split->second), std::move(srem), depth + 1);
    } else {
      recurse(prem, split->first, depth + 1);
      recurse(std::move(prem), std::move(split->second), depth + 1);
    }
  }
};

}  // namespace

std::vector<BipartiteBlock> batched_locate(const std::vector<PLItem>& points,
                                           const std::vector<PLItem>& surfaces,
                                           const IncidenceFamily& F, const PLConfig& cfg,
                                           SignTestLedger* ledger, uint64_t seed,
                                           LocateStats* stats) {
  for (size_t i = 0; i < points.size(); ++i)
    if (points[i].id != i) throw input_error("batched_locate: point ids must be dense 0..M-1");
  for (size_t i = 0; i < surfaces.size(); ++i)
    if (surfaces[i].id != i) throw input_error("batched_locate: surface ids must be dense 0..N-1");

  Engine eng{points, surfaces, F, cfg, ledger, stats, SplitMix64(seed), 0, {}};
  std::vector<uint32_t> P(points.size()), S(surfaces.size());
  for (size_t i = 0; i < P.size(); ++i) P[i] = static_cast<uint32_t>(i);
  for (size_t i = 0; i < S.size(); ++i) S[i] = static_cast<uint32_t>(i);
  eng.recurse(std::move(P), std::move(S), 0);
  return std::move(eng.out);
}

void verify_blocks(const std::vector<BipartiteBlock>& blocks, const std::vector<PLItem>& points,
                   const std::vector<PLItem>& surfaces, const IncidenceFamily& F, double fraction,
                   uint64_t seed, SignTestLedger* ledger) {
  SplitMix64 rng(seed);
  for (const auto& blk : blocks) {
    size_t pairs = blk.points.size() * blk.surfaces.size();
    size_t samples = std::max<size_t>(1, static_cast<size_t>(fraction * static_cast<double>(pairs)));
    for (size_t k = 0; k < samples; ++k) {
      uint32_t pid = blk.points[rng.uniform(0, blk.points.size() - 1)];
      size_t sslot = rng.uniform(0, blk.surfaces.size() - 1);
      if (ledger) ledger->record(Phase::fredman_primal, F.degree, F.arity);
      int got = F.sign_exact(points[pid], surfaces[blk.surfaces[sslot]]);
      if (got != blk.signs[sslot])
        throw internal_error("block sign verification failed: stored " +
                             std::to_string(blk.signs[sslot]) + ", exact " + std::to_string(got));
    }
  }
}

BlockSignLookup::BlockSignLookup(const std::vector<BipartiteBlock>& blocks, size_t num_points,
                                 size_t num_surfaces) {
  (void)num_surfaces;
  prepared_.resize(blocks.size());
  blocks_of_point_.resize(num_points);
  for (size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    std::vector<size_t> ord(blk.surfaces.size());
    for (size_t i = 0; i < ord.size(); ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(),
              [&](size_t x, size_t y) { return blk.surfaces[x] < blk.surfaces[y]; });
    auto& pb = prepared_[b];
    pb.surfaces.reserve(ord.size());
    pb.signs.reserve(ord.size());
    for (size_t i : ord) {
      pb.surfaces.push_back(blk.surfaces[i]);
      pb.signs.push_back(blk.signs[i]);
    }
    for (uint32_t pid : blk.points) blocks_of_point_[pid].push_back(static_cast<uint32_t>(b));
  }
}

int BlockSignLookup::sign(uint32_t point, uint32_t surface) const {
  for (uint32_t b : blocks_of_point_[point]) {
    const auto& pb = prepared_[b];
    auto it = std::lower_bound(pb.surfaces.begin(), pb.surfaces.end(), surface);
    if (it != pb.surfaces.end() && *it == surface)
      return pb.signs[static_cast<size_t>(it - pb.surfaces.begin())];
  }
  throw internal_error("block cover incomplete: pair (" + std::to_string(point) + ", " +
                       std::to_string(surface) + ") unseen");
}

std::vector<PLCellOut> partition_round(const std::vector<PLItem>& points,
                                       const std::vector<PLItem>& surfaces,
                                       const IncidenceFamily& F, size_t point_cap,
                                       SignTestLedger* ledger) {
  if (point_cap < 1) throw input_error("partition_round: need point_cap >= 1");
  std::vector<PLCellOut> cells;
  if (points.empty()) return cells;

  struct Job {
    std::vector<uint32_t> pts, surs;
  };
  std::vector<Job> work;
  {
    Job root;
    root.pts.resize(points.size());
    for (size_t i = 0; i < points.size(); ++i) root.pts[i] = static_cast<uint32_t>(i);
    root.surs.resize(surfaces.size());
    for (size_t i = 0; i < surfaces.size(); ++i) root.surs[i] = static_cast<uint32_t>(i);
    work.push_back(std::move(root));
  }

  auto route = [&](const std::vector<FloatInterval>& box, const std::vector<uint32_t>& surs) {
    std::vector<uint32_t> kept;
    for (uint32_t si : surs) {
      if (ledger) ledger->record(Phase::fredman_primal, F.degree, F.arity);
      if (F.range(box, item_box(surfaces[si])).contains_zero()) kept.push_back(si);
    }
    return kept;
  };

  PLConfig defaults;
  Engine splitter{points, surfaces, F, defaults, ledger, nullptr, SplitMix64(1), 0, {}};
  while (!work.empty()) {
    Job job = std::move(work.back());
    work.pop_back();
    auto box = hull_box(points, job.pts);
    if (job.pts.size() <= point_cap) {
      cells.push_back({std::move(job.pts), route(box, job.surs), std::move(box)});
      continue;
    }
    auto split = splitter.split_side(points, job.pts, Phase::fredman_primal);
    if (!split) {  // identical points: cap does not apply
      cells.push_back({std::move(job.pts), route(box, job.surs), std::move(box)});
      continue;
    }
    work.push_back({std::move(split->first), job.surs});
    work.push_back({std::move(split->second), std::move(job.surs)});
  }
  return cells;
}

}  // namespace trivar
