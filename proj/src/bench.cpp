#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "curve.hpp"
#include "oracle.hpp"

namespace trivar {

SlopeFit fit_log2(const std::vector<double>& xs, const std::vector<double>& ys) {
  SlopeFit f;
  f.points = std::min(xs.size(), ys.size());
  if (f.points < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(f.points), ly(f.points);
  for (size_t i = 0; i < f.points; ++i) {
    lx[i] = std::log2(xs[i]);
    ly[i] = std::log2(ys[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double np = static_cast<double>(f.points);
  double det = np * sxx - sx * sx;
  if (det == 0) return f;
  f.slope = (np * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / np;
  double ss = 0;
  for (size_t i = 0; i < f.points; ++i) {
    double r = ly[i] - (f.slope * lx[i] + f.intercept);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / np);
  return f;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t m = v.size() / 2;
  if (v.size() % 2 == 1) return v[m];
  return (v[m - 1] + v[m]) / 2.0;
}

// The global-sort baseline. Counted work: one denominator sign per pair, one
// comparison per sort comparator call, one pencil test per binary probe. The
// float-interval fast path inside a comparison changes arithmetic cost only;
// the test is charged either way.
Decision collinear_211_directsort(const Instance& inst) {
  if (!inst.curveC.is_x_axis())
    throw input_error("collinear_211_directsort: gamma_C must be the x-axis");
  const ParamCurve& cb = inst.curveB;

  Decision dec;
  SignTestLedger& led = dec.ledger;
  nlohmann::json diag;
  diag["pipeline"] = "direct-sort";

  auto make_found = [&](size_t ia, size_t it, size_t is) -> Decision {
    std::array<Rational, 2> b = cb.eval(inst.T[it]);
    std::array<Rational, 2> c{inst.S[is], Rational(0)};
    led.record(Phase::search, 2, 6);
    if (orient(inst.A[ia], b, c) != 0)
      throw internal_error("found witness failed exact verification");
    Witness w;
    w.ia = ia;
    w.ib = it;
    w.ic = is;
    w.a = inst.A[ia];
    w.t = inst.T[it];
    w.s = inst.S[is];
    dec.found = true;
    dec.witness = std::move(w);
    dec.diagnostics = diag;
    return std::move(dec);
  };

  const auto& A = inst.A;
  const auto& T = inst.T;
  const auto& S = inst.S;
  if (A.empty() || T.empty() || S.empty()) {
    dec.diagnostics = diag;
    return dec;
  }

  // Comparison-surface degrees, from the symbolic forms.
  int cmp_degree, pencil_degree, den_degree;
  {
    const auto& v6 = fvars();
    auto embed = [&](const UniPoly& p, size_t var) { return MultiPoly::from_unipoly(p, v6, var); };
    MultiPoly x1v = MultiPoly::var(v6, "x1"), x2v = MultiPoly::var(v6, "x2");
    MultiPoly y1v = MultiPoly::var(v6, "y1"), y2v = MultiPoly::var(v6, "y2");
    MultiPoly n1 = x1v * embed(cb.y_num(), 4) * embed(cb.x_den(), 4) -
                   x2v * embed(cb.x_num(), 4) * embed(cb.y_den(), 4);
    MultiPoly d1 = embed(cb.x_den(), 4) * (embed(cb.y_num(), 4) - x2v * embed(cb.y_den(), 4));
    MultiPoly n2 = y1v * embed(cb.y_num(), 5) * embed(cb.x_den(), 5) -
                   y2v * embed(cb.x_num(), 5) * embed(cb.y_den(), 5);
    MultiPoly d2 = embed(cb.x_den(), 5) * (embed(cb.y_num(), 5) - y2v * embed(cb.y_den(), 5));
    cmp_degree = std::max((n1 * d2 - n2 * d1).total_degree(), 1);
    den_degree = std::max(d1.total_degree() - 1, 1);
    pencil_degree = std::max(cmp_degree / 2 + 1, 2);
  }

  struct CurveVals {
    Rational xn, xd, yn, yd;
  };
  std::vector<CurveVals> tv(T.size());
  std::vector<std::array<FloatInterval, 4>> tvf(T.size());
  for (size_t u = 0; u < T.size(); ++u) {
    tv[u] = {cb.x_num().eval(T[u]), cb.x_den().eval(T[u]), cb.y_num().eval(T[u]),
             cb.y_den().eval(T[u])};
    tvf[u] = {FloatInterval::of(tv[u].xn), FloatInterval::of(tv[u].xd),
              FloatInterval::of(tv[u].yn), FloatInterval::of(tv[u].yd)};
  }
  std::vector<std::array<FloatInterval, 2>> af(A.size());
  for (size_t i = 0; i < A.size(); ++i)
    af[i] = {FloatInterval::of(A[i][0]), FloatInterval::of(A[i][1])};

  auto num_exact = [&](size_t i, size_t u) {
    return A[i][0] * tv[u].yn * tv[u].xd - A[i][1] * tv[u].xn * tv[u].yd;
  };
  auto den_exact = [&](size_t i, size_t u) {
    return tv[u].xd * (tv[u].yn - A[i][1] * tv[u].yd);
  };
  auto num_iv = [&](size_t i, size_t u) {
    return af[i][0] * tvf[u][2] * tvf[u][1] - af[i][1] * tvf[u][0] * tvf[u][3];
  };
  auto den_iv = [&](size_t i, size_t u) {
    return tvf[u][1] * (tvf[u][2] - af[i][1] * tvf[u][3]);
  };

  // Pair table with denominator signs; phi is infinite where den = 0, and a
  // vanishing numerator there means the pair is collinear with every s.
  struct Entry {
    uint32_t a, t;
  };
  std::vector<Entry> pairs;
  pairs.reserve(A.size() * T.size());
  std::vector<int8_t> dsign(A.size() * T.size());
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t u = 0; u < T.size(); ++u) {
      led.record(Phase::sign_resolution, den_degree, 3);
      int ds = den_iv(i, u).determined_sign();
      if (ds == 0) ds = den_exact(i, u).sign();
      if (ds == 0) {
        if (num_exact(i, u).is_zero()) {
          diag["resolved_by"] = "infinite-phi";
          return make_found(i, u, 0);
        }
        continue;
      }
      dsign[i * T.size() + u] = static_cast<int8_t>(ds);
      pairs.push_back({static_cast<uint32_t>(i), static_cast<uint32_t>(u)});
    }

  uint64_t comparisons = 0, exact_fallbacks = 0;
  auto cmp_pairs = [&](const Entry& x, const Entry& y) {
    led.record(Phase::sign_resolution, cmp_degree, 6);
    ++comparisons;
    int sx = dsign[x.a * T.size() + x.t], sy = dsign[y.a * T.size() + y.t];
    FloatInterval w = num_iv(x.a, x.t) * den_iv(y.a, y.t) - num_iv(y.a, y.t) * den_iv(x.a, x.t);
    int sw = w.determined_sign();
    if (sw == 0) {
      ++exact_fallbacks;
      sw = (num_exact(x.a, x.t) * den_exact(y.a, y.t) -
            num_exact(y.a, y.t) * den_exact(x.a, x.t))
               .sign();
    }
    return sw * sx * sy < 0;
  };
  std::sort(pairs.begin(), pairs.end(), cmp_pairs);

  uint64_t probes = 0;
  for (size_t ks = 0; ks < S.size(); ++ks) {
    FloatInterval sIv = FloatInterval::of(S[ks]);
    size_t lo = 0, hi = pairs.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      const Entry& e = pairs[mid];
      led.record(Phase::search, pencil_degree, 4);
      ++probes;
      int sd = dsign[e.a * T.size() + e.t];
      FloatInterval w = num_iv(e.a, e.t) - sIv * den_iv(e.a, e.t);
      int c = w.determined_sign();
      if (c == 0) c = (num_exact(e.a, e.t) - S[ks] * den_exact(e.a, e.t)).sign();
      c *= sd;
      if (c == 0) {
        diag["sort"] = {{"pairs", pairs.size()},
                        {"comparisons", comparisons},
                        {"exact_fallbacks", exact_fallbacks},
                        {"probes", probes}};
        return make_found(e.a, e.t, ks);
      }
      if (c < 0)
        lo = mid + 1;
      else
        hi = mid;
    }
  }
  diag["sort"] = {{"pairs", pairs.size()},
                  {"comparisons", comparisons},
                  {"exact_fallbacks", exact_fallbacks},
                  {"probes", probes}};
  dec.diagnostics = diag;
  return dec;
}

namespace {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return std::min(requested, 256u);
  if (const char* env = std::getenv("TRIVAR_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct RunResult {
  bool ran = false;
  bool error = false;
  bool found = false;
  std::string message;
  uint64_t total = 0;
  double seconds = 0.0;
};

InstanceSpec spec_for(const BenchConfig& cfg, size_t size_idx, size_t seed_idx) {
  InstanceSpec sp;
  sp.family = cfg.family;
  sp.n = cfg.sizes[size_idx];
  sp.seed = cfg.seed0 + 7919 * static_cast<uint64_t>(size_idx) + seed_idx;
  return sp;
}

RunResult one_run(const std::string& pipeline, const InstanceSpec& sp,
                  const PipelineOptions& base_opt) {
  RunResult r;
  auto t0 = std::chrono::steady_clock::now();
  try {
    Instance inst = generate(sp);
    if (pipeline == "oracle") {
      SignTestLedger led;
      r.found = oracle_has_triple(inst, &led);
      r.total = led.total();
    } else if (pipeline == "direct-sort") {
      Decision dec = collinear_211_directsort(inst);
      r.found = dec.found;
      r.total = dec.ledger.total();
    } else {
      PipelineOptions opt = base_opt;
      opt.seed = sp.seed;
      Decision dec = run_pipeline(pipeline, inst, opt);
      r.found = dec.found;
      r.total = dec.ledger.total();
    }
    r.ran = true;
  } catch (const std::exception& e) {
    r.error = true;
    r.message = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// One pipeline over the whole size x seed grid, seeds in parallel.
nlohmann::json sweep(const BenchConfig& cfg, const std::string& pipeline,
                     std::chrono::steady_clock::time_point deadline, bool use_deadline,
                     bool* partial) {
  struct Slot {
    size_t size_idx, seed_idx;
  };
  std::vector<Slot> slots;
  for (size_t si = 0; si < cfg.sizes.size(); ++si)
    for (size_t sd = 0; sd < cfg.seeds; ++sd) slots.push_back({si, sd});
  std::vector<RunResult> results(slots.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> over_budget{false};
  unsigned threads = std::min<size_t>(resolve_threads(cfg.threads), slots.size());

  auto worker = [&]() {
    for (;;) {
      size_t k = next.fetch_add(1);
      if (k >= slots.size()) return;
      if (use_deadline && std::chrono::steady_clock::now() > deadline) {
        over_budget.store(true);
        continue;
      }
      results[k] = one_run(pipeline, spec_for(cfg, slots[k].size_idx, slots[k].seed_idx),
                           cfg.opt);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  nlohmann::json per_size = nlohmann::json::array();
  std::vector<double> fit_x, fit_y;
  for (size_t si = 0; si < cfg.sizes.size(); ++si) {
    std::vector<double> totals, seconds;
    nlohmann::json errors = nlohmann::json::array();
    size_t skipped = 0;
    for (size_t k = 0; k < slots.size(); ++k) {
      if (slots[k].size_idx != si) continue;
      const RunResult& r = results[k];
      if (r.error) {
        errors.push_back(r.message);
        *partial = true;
      } else if (!r.ran) {
        ++skipped;
        *partial = true;
      } else {
        totals.push_back(static_cast<double>(r.total));
        seconds.push_back(r.seconds);
      }
    }
    nlohmann::json row;
    row["n"] = cfg.sizes[si];
    row["runs"] = totals.size();
    row["skipped"] = skipped;
    if (!errors.empty()) row["errors"] = errors;
    if (!totals.empty()) {
      double med = median_of(totals);
      row["median_count"] = med;
      double acc = 0;
      for (double s : seconds) acc += s;
      row["mean_wall_seconds"] = acc / static_cast<double>(seconds.size());
      fit_x.push_back(static_cast<double>(cfg.sizes[si]));
      fit_y.push_back(med);
    }
    per_size.push_back(row);
  }
  if (over_budget.load()) *partial = true;

  nlohmann::json out;
  out["pipeline"] = pipeline;
  out["per_size"] = per_size;
  if (fit_x.size() >= 4) {
    SlopeFit f = fit_log2(fit_x, fit_y);
    out["fit"] = {{"slope", f.slope},
                  {"intercept", f.intercept},
                  {"residual", f.residual},
                  {"points", f.points}};
  } else {
    out["fit"] = nullptr;
  }
  return out;
}

}  // namespace

nlohmann::json run_bench(const BenchConfig& cfg) {
  if (cfg.sizes.empty()) throw input_error("bench: no sizes given");
  for (size_t i = 1; i < cfg.sizes.size(); ++i)
    if (cfg.sizes[i] <= cfg.sizes[i - 1]) throw input_error("bench: sizes must be ascending");
  if (cfg.seeds == 0) throw input_error("bench: seeds must be positive");

  bool partial = false;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(cfg.budget_seconds));
  bool use_deadline = cfg.budget_seconds > 0;

  nlohmann::json report;
  report["family"] = cfg.family;
  report["sizes"] = cfg.sizes;
  report["seeds_per_size"] = cfg.seeds;
  report["seed0"] = cfg.seed0;
  report["units"] = {{"median_count", "count"}, {"mean_wall_seconds", "seconds"}};
  report["main"] = sweep(cfg, cfg.pipeline, deadline, use_deadline, &partial);

  size_t max_n = cfg.sizes.back();
  bool want_direct = cfg.baselines == "all" ||
                     (cfg.baselines == "auto" && cfg.pipeline != "direct-sort" &&
                      cfg.pipeline != "oracle" && max_n <= 8192);
  bool want_oracle = cfg.baselines == "all" ||
                     (cfg.baselines == "auto" && cfg.pipeline != "oracle" && max_n <= 256);
  nlohmann::json baselines = nlohmann::json::object();
  if (want_direct) baselines["direct-sort"] = sweep(cfg, "direct-sort", deadline, use_deadline,
                                                    &partial);
  if (want_oracle) baselines["oracle"] = sweep(cfg, "oracle", deadline, use_deadline, &partial);
  report["baselines"] = baselines;
  report["partial"] = partial;
  return report;
}

}  // namespace trivar
