#include "pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "curve.hpp"
#include "fredman.hpp"
#include "goodfibers.hpp"
#include "oracle.hpp"
#include "realroot.hpp"
#include "rng.hpp"

namespace trivar {

size_t auto_g_line(size_t n) {
  if (n < 2) return 2;
  auto g = static_cast<size_t>(std::llround(std::pow(static_cast<double>(n), 2.0 / 15.0)));
  return std::max<size_t>(2, g);
}

size_t auto_h_line(size_t n, size_t g) {
  if (n == 0) return 1;
  size_t root = static_cast<size_t>(std::sqrt(static_cast<double>(n)));
  while (root * root < n) ++root;
  size_t hs = static_cast<size_t>(std::sqrt(static_cast<double>(n * g)));
  while (hs * hs < n * g) ++hs;
  return std::max<size_t>(1, std::min(hs, root));
}

size_t auto_g_alt(size_t n) {
  if (n < 2) return 2;
  auto g = static_cast<size_t>(std::llround(std::pow(static_cast<double>(n), 2.0 / 29.0)));
  return std::max<size_t>(2, g);
}

namespace {

uint64_t key2(uint32_t a, uint32_t b) { return (static_cast<uint64_t>(a) << 32) | b; }

size_t ceil_sqrt(size_t n) {
  if (n == 0) return 0;
  auto r = static_cast<size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return r;
}

std::vector<size_t> iota_vec(size_t n) {
  std::vector<size_t> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Index order sorted by value; every comparator call is a counted degree-1 test.
std::vector<size_t> sorted_order(const std::vector<Rational>& vals, SignTestLedger& led,
                                 Phase ph) {
  auto ord = iota_vec(vals.size());
  std::sort(ord.begin(), ord.end(), [&](size_t a, size_t b) {
    led.record(ph, 1, 2);
    return Rational::cmp(vals[a], vals[b]) < 0;
  });
  return ord;
}

// Binary search for an exact match; one counted test per probe.
std::optional<size_t> find_value(const std::vector<size_t>& ord,
                                 const std::vector<Rational>& vals, const Rational& x,
                                 SignTestLedger& led, Phase ph) {
  size_t lo = 0, hi = ord.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    led.record(ph, 1, 2);
    int c = Rational::cmp(x, vals[ord[mid]]);
    if (c == 0) return ord[mid];
    if (c < 0)
      hi = mid;
    else
      lo = mid + 1;
  }
  return std::nullopt;
}

// All indices whose value equals the algebraic number x, duplicates included.
std::vector<size_t> find_root_matches(const std::vector<size_t>& ord,
                                      const std::vector<Rational>& vals, const RealAlgebraic& x,
                                      int deg, SignTestLedger& led, Phase ph) {
  deg = std::max(deg, 1);
  std::vector<size_t> out;
  size_t lo = 0, hi = ord.size();
  std::optional<size_t> hit;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    led.record(ph, deg, 2);
    int c = RealAlgebraic::cmp(x, vals[ord[mid]]);
    if (c == 0) {
      hit = mid;
      break;
    }
    if (c < 0)
      hi = mid;
    else
      lo = mid + 1;
  }
  if (!hit) return out;
  size_t first = *hit, last = *hit;
  while (first > 0) {
    led.record(ph, deg, 2);
    if (RealAlgebraic::cmp(x, vals[ord[first - 1]]) != 0) break;
    --first;
  }
  while (last + 1 < ord.size()) {
    led.record(ph, deg, 2);
    if (RealAlgebraic::cmp(x, vals[ord[last + 1]]) != 0) break;
    ++last;
  }
  for (size_t i = first; i <= last; ++i) out.push_back(ord[i]);
  return out;
}

std::vector<FloatInterval> float_coefs(const UniPoly& p) {
  std::vector<FloatInterval> c;
  c.reserve(p.coefs().size());
  for (const auto& q : p.coefs()) c.push_back(FloatInterval::of(q));
  return c;
}

FloatInterval horner(const std::vector<FloatInterval>& c, const FloatInterval& x) {
  if (c.empty()) return FloatInterval::point(0);
  FloatInterval acc = c.back();
  for (size_t i = c.size() - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

void verify_collinear(const std::array<Rational, 2>& a, const std::array<Rational, 2>& b,
                      const std::array<Rational, 2>& c, SignTestLedger& led) {
  led.record(Phase::search, 2, 6);
  if (orient(a, b, c) != 0) throw internal_error("found witness failed exact verification");
}

void verify_vanish(const MultiPoly& F, const std::array<Rational, 2>& a,
                   const std::array<Rational, 2>& b, const std::array<Rational, 2>& c,
                   SignTestLedger& led) {
  std::array<Rational, 6> at{a[0], a[1], b[0], b[1], c[0], c[1]};
  led.record(Phase::search, std::max(F.total_degree(), 1), 6);
  if (!F.eval(std::span<const Rational>(at.data(), at.size())).is_zero())
    throw internal_error("found witness failed exact verification");
}

// Canonicalized direction classes around a center; reports one mixed class.
// Family 0/1 indices come back as (idx0, idx1). Every sign test is charged to
// the degeneracy phase: canonicalization per entry, comparator and run-break
// tests per call.
struct AngularEntry {
  Rational dx, dy;
  int fam = 0;
  size_t idx = 0;
};

std::optional<std::pair<size_t, size_t>> angular_mixed(std::vector<AngularEntry> dirs,
                                                       SignTestLedger& led) {
  for (auto& e : dirs) {
    led.record(Phase::degeneracy, 1, 2);
    int sy = e.dy.sign();
    if (sy < 0 || (sy == 0 && e.dx.sign() < 0)) {
      e.dx = -e.dx;
      e.dy = -e.dy;
    }
  }
  std::sort(dirs.begin(), dirs.end(), [&](const AngularEntry& u, const AngularEntry& v) {
    led.record(Phase::degeneracy, 2, 4);
    return (u.dx * v.dy - u.dy * v.dx).sign() > 0;
  });
  auto scan = [&](size_t b, size_t e) -> std::optional<std::pair<size_t, size_t>> {
    std::optional<size_t> i0, i1;
    for (size_t i = b; i < e; ++i) {
      if (dirs[i].fam == 0)
        i0 = dirs[i].idx;
      else
        i1 = dirs[i].idx;
      if (i0 && i1) return std::make_pair(*i0, *i1);
    }
    return std::nullopt;
  };
  size_t start = 0;
  for (size_t i = 1; i < dirs.size(); ++i) {
    led.record(Phase::degeneracy, 2, 4);
    if ((dirs[i - 1].dx * dirs[i].dy - dirs[i - 1].dy * dirs[i].dx).sign() != 0) {
      if (auto r = scan(start, i)) return r;
      start = i;
    }
  }
  if (!dirs.empty())
    if (auto r = scan(start, dirs.size())) return r;
  return std::nullopt;
}

}  // namespace

// gamma_C is the x-axis and gamma_B is rationally parameterized: collinearity
// of (a, b(t), (s, 0)) reduces to s = phi(a, t) with phi a fixed rational
// function. After the exceptional-set preprocessing below, phi is defined on
// every surviving (a, t) pair, the engine sorts each bottom cell's phi values
// through batched comparisons, and each s does a pruned descent plus binary
// searches in the reached cells.
Decision collinear_211_line(const Instance& inst, const PipelineOptions& opt) {
  if (!inst.curveC.is_x_axis())
    throw input_error("collinear_211_line: gamma_C must be the x-axis");
  const ParamCurve& cb = inst.curveB;

  Decision dec;
  SignTestLedger& led = dec.ledger;
  nlohmann::json diag;
  diag["pipeline"] = "211-line";

  auto make_found = [&](size_t ia, size_t it, size_t is) -> Decision {
    std::array<Rational, 2> b = cb.eval(inst.T[it]);
    std::array<Rational, 2> c{inst.S[is], Rational(0)};
    verify_collinear(inst.A[ia], b, c, led);
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
  auto make_not_found = [&]() -> Decision {
    dec.found = false;
    dec.diagnostics = diag;
    return std::move(dec);
  };

  const std::vector<std::array<Rational, 2>>& A = inst.A;
  const std::vector<Rational>& T = inst.T;
  const std::vector<Rational>& S = inst.S;
  if (A.empty() || T.empty() || S.empty()) {
    diag["resolved_by"] = "empty-input";
    return make_not_found();
  }

  auto ordT = sorted_order(T, led, Phase::partition_build);
  auto ordS = sorted_order(S, led, Phase::partition_build);

  // gamma_B inside the x-axis: every triple lies on a common line iff some a
  // does, or some b coincides with some c.
  if (cb.y_num().is_zero()) {
    diag["resolved_by"] = "common-line";
    for (size_t i = 0; i < A.size(); ++i) {
      led.record(Phase::degeneracy, 1, 1);
      if (A[i][1].is_zero()) return make_found(i, 0, 0);
    }
    for (size_t u = 0; u < T.size(); ++u) {
      std::array<Rational, 2> b = cb.eval(T[u]);
      if (auto hit = find_value(ordS, S, b[0], led, Phase::degeneracy))
        return make_found(0, u, *hit);
    }
    return make_not_found();
  }

  const int ydeg = std::max(cb.y_num().degree(), 1);

  // B meets C: parameters where gamma_B crosses the axis at a point of S.
  for (const auto& tr : real_roots_distinct(cb.y_num())) {
    for (size_t u : find_root_matches(ordT, T, tr, ydeg, led, Phase::degeneracy)) {
      std::array<Rational, 2> b = cb.eval(T[u]);
      if (auto hit = find_value(ordS, S, b[0], led, Phase::degeneracy)) {
        diag["resolved_by"] = "b-c-coincidence";
        return make_found(0, u, *hit);
      }
    }
  }

  // A meets B.
  for (size_t i = 0; i < A.size(); ++i) {
    UniPoly px = cb.x_num() - cb.x_den().scaled(A[i][0]);
    UniPoly py = cb.y_num() - cb.y_den().scaled(A[i][1]);
    const UniPoly* probe = &px;
    if (px.is_zero()) {
      if (py.is_zero()) {
        diag["resolved_by"] = "a-b-coincidence";
        return make_found(i, 0, 0);
      }
      probe = &py;
    }
    int pdeg = std::max(probe->degree(), 1);
    for (const auto& tr : real_roots_distinct(*probe)) {
      for (size_t u : find_root_matches(ordT, T, tr, pdeg, led, Phase::degeneracy)) {
        std::array<Rational, 2> b = cb.eval(T[u]);
        led.record(Phase::degeneracy, 1, 2);
        bool same = Rational::cmp(b[0], A[i][0]) == 0;
        if (same) {
          led.record(Phase::degeneracy, 1, 2);
          same = Rational::cmp(b[1], A[i][1]) == 0;
        }
        if (same) {
          diag["resolved_by"] = "a-b-coincidence";
          return make_found(i, u, 0);
        }
      }
    }
  }

  // A meets C.
  for (size_t i = 0; i < A.size(); ++i) {
    led.record(Phase::degeneracy, 1, 1);
    if (!A[i][1].is_zero()) continue;
    if (auto hit = find_value(ordS, S, A[i][0], led, Phase::degeneracy)) {
      diag["resolved_by"] = "a-c-coincidence";
      return make_found(i, 0, *hit);
    }
  }

  std::vector<char> dead_a(A.size(), 0), dead_t(T.size(), 0), dead_s(S.size(), 0);
  size_t removed_s = 0, removed_t = 0, removed_a_axis = 0, removed_a_horizontal = 0;

  // Points of C on gamma_B: resultant roots nominate candidates, a gcd check
  // with pole filtering confirms them, and an angular sort around each
  // confirmed point either finds a witness through it or retires it.
  {
    std::vector<std::string> ts{"t", "s"};
    MultiPoly xt = MultiPoly::from_unipoly(cb.x_num(), ts, 0) -
                   MultiPoly::from_unipoly(cb.x_den(), ts, 0) * MultiPoly::var(ts, "s");
    MultiPoly yt = MultiPoly::from_unipoly(cb.y_num(), ts, 0);

    // Degenerate shapes first: a curve inside the x-axis keeps every s in
    // play, constant nonzero y never meets the axis, constant x pins s.
    std::vector<size_t> candidates;
    if (yt.is_zero()) {
      candidates = iota_vec(S.size());
    } else if (yt.degree(0) <= 0) {
      // nonzero constant y: gamma_B misses C entirely
    } else if (xt.degree(0) <= 0) {
      Rational c0 = cb.x_num().eval(Rational(0)) / cb.x_den().eval(Rational(0));
      if (auto hit = find_value(ordS, S, c0, led, Phase::degeneracy)) candidates.push_back(*hit);
    } else {
      MultiPoly R = MultiPoly::resultant(xt, yt, 0);
      if (!R.is_zero()) {
        UniPoly Rs = R.to_unipoly(1);
        int rdeg = std::max(Rs.degree(), 1);
        for (const auto& rr : real_roots_distinct(Rs))
          for (size_t k : find_root_matches(ordS, S, rr, rdeg, led, Phase::degeneracy))
            candidates.push_back(k);
      } else {
        candidates = iota_vec(S.size());
      }
    }
    for (size_t k : candidates) {
      if (dead_s[k]) continue;
      UniPoly shift = cb.x_num() - cb.x_den().scaled(S[k]);
      MultiPoly g = MultiPoly::gcd(MultiPoly::from_unipoly(cb.y_num(), ts, 0),
                                   MultiPoly::from_unipoly(shift, ts, 0));
      led.record(Phase::degeneracy, ydeg, 1);
      UniPoly gu = g.to_unipoly(0);
      bool on_curve = false;
      if (gu.degree() >= 1) {
        for (const auto& troot : real_roots_distinct(gu)) {
          led.record(Phase::degeneracy, std::max(cb.x_den().degree(), 1), 1);
          if (sign_at(cb.x_den(), troot) == 0) continue;
          led.record(Phase::degeneracy, std::max(cb.y_den().degree(), 1), 1);
          if (sign_at(cb.y_den(), troot) == 0) continue;
          on_curve = true;
          break;
        }
      }
      if (!on_curve) continue;
      std::array<Rational, 2> center{S[k], Rational(0)};
      std::vector<AngularEntry> dirs;
      for (size_t i = 0; i < A.size(); ++i) {
        Rational dx = A[i][0] - center[0], dy = A[i][1] - center[1];
        if (dx.is_zero() && dy.is_zero()) continue;
        dirs.push_back({std::move(dx), std::move(dy), 0, i});
      }
      for (size_t u = 0; u < T.size(); ++u) {
        std::array<Rational, 2> b = cb.eval(T[u]);
        Rational dx = b[0] - center[0], dy = b[1] - center[1];
        if (dx.is_zero() && dy.is_zero()) continue;
        dirs.push_back({std::move(dx), std::move(dy), 1, u});
      }
      if (auto hit = angular_mixed(std::move(dirs), led)) {
        diag["resolved_by"] = "c-on-curve";
        return make_found(hit->first, hit->second, k);
      }
      dead_s[k] = 1;
      ++removed_s;
    }
  }

  // Points of B on the x-axis: same treatment around each axis crossing.
  for (const auto& tr : real_roots_distinct(cb.y_num())) {
    for (size_t u : find_root_matches(ordT, T, tr, ydeg, led, Phase::degeneracy)) {
      if (dead_t[u]) continue;
      std::array<Rational, 2> center = cb.eval(T[u]);
      std::vector<AngularEntry> dirs;
      for (size_t i = 0; i < A.size(); ++i) {
        Rational dx = A[i][0] - center[0], dy = A[i][1] - center[1];
        if (dx.is_zero() && dy.is_zero()) continue;
        dirs.push_back({std::move(dx), std::move(dy), 0, i});
      }
      for (size_t k = 0; k < S.size(); ++k) {
        if (dead_s[k]) continue;
        Rational dx = S[k] - center[0], dy = -center[1];
        if (dx.is_zero() && dy.is_zero()) continue;
        dirs.push_back({std::move(dx), std::move(dy), 1, k});
      }
      if (auto hit = angular_mixed(std::move(dirs), led)) {
        diag["resolved_by"] = "b-on-axis";
        return make_found(hit->first, u, hit->second);
      }
      dead_t[u] = 1;
      ++removed_t;
    }
  }

  // Points of A on the axis: with axis crossings of B gone, they cannot sit
  // on any remaining triple's line.
  for (size_t i = 0; i < A.size(); ++i) {
    led.record(Phase::degeneracy, 1, 1);
    if (A[i][1].is_zero()) {
      dead_a[i] = 1;
      ++removed_a_axis;
    }
  }

  // Poles of phi(a, .): parameters where den(a, t) = xd * (yn - a2 yd)
  // vanishes. A vanishing numerator there means b(t) = a; otherwise the pair
  // is excluded from its cell list. An identically vanishing denominator
  // means gamma_B is the horizontal line through a, which misses the axis.
  std::vector<std::pair<size_t, size_t>> pole_pairs;
  for (size_t i = 0; i < A.size(); ++i) {
    if (dead_a[i]) continue;
    UniPoly e = cb.y_num() - cb.y_den().scaled(A[i][1]);
    if (e.is_zero()) {
      dead_a[i] = 1;
      ++removed_a_horizontal;
      continue;
    }
    int edeg = std::max(e.degree(), 1);
    for (const auto& tr : real_roots_distinct(e)) {
      for (size_t u : find_root_matches(ordT, T, tr, edeg, led, Phase::degeneracy)) {
        if (dead_t[u]) continue;
        std::array<Rational, 2> b = cb.eval(T[u]);
        led.record(Phase::degeneracy, 2, 4);
        Rational num = A[i][0] * b[1] - A[i][1] * b[0];
        if (num.is_zero() && b[1] == A[i][1]) {
          // phi numerator and denominator both vanish: b(t) = a.
          diag["resolved_by"] = "pole-coincidence";
          return make_found(i, u, 0);
        }
        pole_pairs.push_back({i, u});
      }
    }
  }

  diag["removed_exceptional"] = {{"s_on_curve", removed_s},
                                 {"t_on_axis", removed_t},
                                 {"a_on_axis", removed_a_axis},
                                 {"a_horizontal", removed_a_horizontal},
                                 {"pole_pairs", pole_pairs.size()}};

  // Reindex the surviving sets.
  std::vector<std::array<Rational, 2>> Af;
  std::vector<Rational> Tf, Sf;
  std::vector<size_t> toA, toT, toS;
  std::vector<size_t> fA(A.size(), SIZE_MAX), fT(T.size(), SIZE_MAX);
  for (size_t i = 0; i < A.size(); ++i)
    if (!dead_a[i]) {
      fA[i] = Af.size();
      Af.push_back(A[i]);
      toA.push_back(i);
    }
  for (size_t u = 0; u < T.size(); ++u)
    if (!dead_t[u]) {
      fT[u] = Tf.size();
      Tf.push_back(T[u]);
      toT.push_back(u);
    }
  for (size_t k = 0; k < S.size(); ++k)
    if (!dead_s[k]) {
      Sf.push_back(S[k]);
      toS.push_back(k);
    }
  if (Af.empty() || Tf.empty() || Sf.empty()) return make_not_found();

  std::unordered_set<uint64_t> excluded;
  for (auto [i, u] : pole_pairs)
    if (fA[i] != SIZE_MAX && fT[u] != SIZE_MAX)
      excluded.insert(key2(static_cast<uint32_t>(fA[i]), static_cast<uint32_t>(fT[u])));

  size_t n = inst.n();
  size_t cap = std::max<size_t>(1, ceil_sqrt(std::max(Af.size(), Tf.size())));
  size_t g = std::min(std::max<size_t>(opt.g.value_or(auto_g_line(n)), 1), cap);
  size_t h = std::min(std::max<size_t>(opt.h.value_or(auto_h_line(n, g)), 1), cap);

  ProductTree21 tree = build_product_21(Af, Tf, g, h, opt.D, provider_by_name(opt.provider),
                                        opt.seed, &led);
  const PartitionTree& PT = tree.planar();
  const ParamTree& QT = tree.curve();

  // Curve values per surviving parameter; uncounted shared subexpressions.
  struct CurveVals {
    Rational xn, xd, yn, yd;
  };
  std::vector<CurveVals> tv(Tf.size());
  for (size_t u = 0; u < Tf.size(); ++u)
    tv[u] = {cb.x_num().eval(Tf[u]), cb.x_den().eval(Tf[u]), cb.y_num().eval(Tf[u]),
             cb.y_den().eval(Tf[u])};

  auto phi_parts = [&](uint32_t ai, uint32_t ti) {
    const CurveVals& c = tv[ti];
    Rational num = Af[ai][0] * c.yn * c.xd - Af[ai][1] * c.xn * c.yd;
    Rational den = c.xd * (c.yn - Af[ai][1] * c.yd);
    return std::make_pair(std::move(num), std::move(den));
  };

  // Degrees of the comparison surface and the pencil, from the symbolic forms.
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

    const auto& v4 = hvars();
    auto embp = [&](const UniPoly& p) { return MultiPoly::from_unipoly(p, v4, 2); };
    MultiPoly ax = MultiPoly::var(v4, "x1"), ay = MultiPoly::var(v4, "x2");
    MultiPoly sv = MultiPoly::var(v4, "s");
    MultiPoly num = ax * embp(cb.y_num()) * embp(cb.x_den()) -
                    ay * embp(cb.x_num()) * embp(cb.y_den());
    MultiPoly den = embp(cb.x_den()) * (embp(cb.y_num()) - ay * embp(cb.y_den()));
    pencil_degree = std::max((num - sv * den).total_degree(), 1);
    den_degree = std::max(den.total_degree(), 1);
  }

  // Engine items: same-cell ordered point pairs against same-node ordered
  // parameter pairs, so a block lookup answers phi(a,t) vs phi(a',t') for any
  // two entries of one cell list.
  std::vector<PLItem> pts;
  std::vector<PLItem> surs;
  std::unordered_map<uint64_t, uint32_t> pid, sid;
  for (uint32_t nid : PT.bottom_nodes()) {
    for (size_t i : PT.node(nid).cell.associated)
      for (size_t j : PT.node(nid).cell.associated) {
        auto id = static_cast<uint32_t>(pts.size());
        pid.emplace(key2(static_cast<uint32_t>(i), static_cast<uint32_t>(j)), id);
        pts.push_back({id,
                       {Af[i][0], Af[i][1], Af[j][0], Af[j][1]},
                       {static_cast<uint32_t>(i), static_cast<uint32_t>(j)}});
      }
  }
  for (uint32_t nid = 0; nid < QT.nodes().size(); ++nid) {
    if (!QT.node(nid).bottom) continue;
    for (size_t u : QT.node(nid).members)
      for (size_t v : QT.node(nid).members) {
        auto id = static_cast<uint32_t>(surs.size());
        sid.emplace(key2(static_cast<uint32_t>(u), static_cast<uint32_t>(v)), id);
        surs.push_back({id, {Tf[u], Tf[v]}, {static_cast<uint32_t>(u), static_cast<uint32_t>(v)}});
      }
  }

  auto fx = float_coefs(cb.x_num()), fxd = float_coefs(cb.x_den());
  auto fy = float_coefs(cb.y_num()), fyd = float_coefs(cb.y_den());

  IncidenceFamily fam;
  fam.degree = cmp_degree;
  fam.arity = 6;
  fam.sign_exact = [&](const PLItem& p, const PLItem& sg) {
    auto [n1, d1] = phi_parts(p.payload.first, sg.payload.first);
    auto [n2, d2] = phi_parts(p.payload.second, sg.payload.second);
    return (n1 * d2 - n2 * d1).sign() * d1.sign() * d2.sign();
  };
  fam.range = [&](std::span<const FloatInterval> bp, std::span<const FloatInterval> bs) {
    auto part = [&](const FloatInterval& a1, const FloatInterval& a2, const FloatInterval& t) {
      FloatInterval xn = horner(fx, t), xd = horner(fxd, t);
      FloatInterval yn = horner(fy, t), yd = horner(fyd, t);
      return std::make_pair(a1 * yn * xd - a2 * xn * yd, xd * (yn - a2 * yd));
    };
    auto [n1, d1] = part(bp[0], bp[1], bs[0]);
    auto [n2, d2] = part(bp[2], bp[3], bs[1]);
    int s1 = d1.determined_sign(), s2 = d2.determined_sign();
    if (s1 == 0 || s2 == 0) return FloatInterval(-1.0, 1.0);
    FloatInterval w = n1 * d2 - n2 * d1;
    if (s1 * s2 < 0) w = FloatInterval(-w.hi, -w.lo);
    return w;
  };

  PLConfig cfg;
  std::string param_note;
  try {
    cfg = solve_parameters(pts.size(), surs.size());
  } catch (const Error& e) {
    param_note = e.what();
  }
  diag["params"] = {{"n", n},
                    {"g", g},
                    {"h", h},
                    {"D", opt.D},
                    {"M", pts.size()},
                    {"N", surs.size()},
                    {"r1j", cfg.r1j},
                    {"r2j", cfg.r2j},
                    {"leaf_cap", cfg.leaf_cap},
                    {"kappa", cfg.kappa},
                    {"provider", opt.provider},
                    {"cmp_degree", cmp_degree},
                    {"pencil_degree", pencil_degree}};
  if (!param_note.empty()) diag["params"]["solver_note"] = param_note;
  diag["mode"] = opt.direct_sort ? "direct-sort" : "fredman";

  std::optional<BlockSignLookup> lookup;
  if (!opt.direct_sort && !pts.empty() && !surs.empty()) {
    LocateStats stats;
    auto blocks = batched_locate(pts, surs, fam, cfg, &led, opt.seed + 0x51, &stats);
    verify_blocks(blocks, pts, surs, fam, 0.01, opt.seed + 0x52, &led);
    lookup.emplace(blocks, pts.size(), surs.size());
    diag["locate"] = nlohmann::json::parse(stats.to_json());
  }

  // Lazy sorted cell lists. With the lookup present every comparison is a
  // free block read; the direct-sort baseline charges each one.
  struct Entry {
    uint32_t a, t;
  };
  struct CellList {
    bool built = false;
    std::vector<Entry> entries;
  };
  auto bpairs = tree.bottom_pairs();
  std::unordered_map<uint64_t, size_t> cell_index;
  for (size_t k = 0; k < bpairs.size(); ++k)
    cell_index.emplace(key2(bpairs[k].left, bpairs[k].right), k);
  std::vector<CellList> lists(bpairs.size());
  uint64_t lists_built = 0, list_entries = 0;

  std::function<bool(const Entry&, const Entry&)> less_phi;
  if (lookup) {
    less_phi = [&](const Entry& x, const Entry& y) {
      return lookup->sign(pid.at(key2(x.a, y.a)), sid.at(key2(x.t, y.t))) < 0;
    };
  } else {
    less_phi = [&](const Entry& x, const Entry& y) {
      led.record(Phase::sign_resolution, cmp_degree, 6);
      auto [n1, d1] = phi_parts(x.a, x.t);
      auto [n2, d2] = phi_parts(y.a, y.t);
      return (n1 * d2 - n2 * d1).sign() * d1.sign() * d2.sign() < 0;
    };
  }

  auto build_list = [&](size_t li, const PairId& pr) {
    CellList& L = lists[li];
    if (L.built) return;
    L.built = true;
    ++lists_built;
    for (size_t i : PT.node(pr.left).cell.associated)
      for (size_t u : QT.node(pr.right).members) {
        if (excluded.contains(key2(static_cast<uint32_t>(i), static_cast<uint32_t>(u)))) continue;
        L.entries.push_back({static_cast<uint32_t>(i), static_cast<uint32_t>(u)});
      }
    std::sort(L.entries.begin(), L.entries.end(), less_phi);
    list_entries += L.entries.size();
  };

  // Pencil enclosures per pair, reused across queries.
  struct PairIv {
    FloatInterval num, den;
  };
  std::unordered_map<uint64_t, PairIv> pair_iv;
  auto pair_interval = [&](const PairId& pr) -> const PairIv& {
    uint64_t k = key2(pr.left, pr.right);
    auto it = pair_iv.find(k);
    if (it != pair_iv.end()) return it->second;
    const auto& bb = PT.node(pr.left).cell.bbox;
    FloatInterval a1 = FloatInterval::of(bb[0]), a2 = FloatInterval::of(bb[1]);
    FloatInterval ti = FloatInterval::of(QT.node(pr.right).interval);
    FloatInterval xn = horner(fx, ti), xd = horner(fxd, ti);
    FloatInterval yn = horner(fy, ti), yd = horner(fyd, ti);
    PairIv v{a1 * yn * xd - a2 * xn * yd, xd * (yn - a2 * yd)};
    return pair_iv.emplace(k, v).first->second;
  };

  uint64_t reached = 0, searches = 0, probes = 0, dropped = 0;
  auto flush_stats = [&]() {
    diag["search"] = {{"reached_cells", reached}, {"searches", searches},     {"probes", probes},
                      {"lists_built", lists_built}, {"list_entries", list_entries},
                      {"dropped", dropped}};
  };

  std::vector<PairId> stack;
  for (size_t ks = 0; ks < Sf.size(); ++ks) {
    FloatInterval sIv = FloatInterval::of(Sf[ks]);
    stack.assign(1, PairId{0, 0});
    while (!stack.empty()) {
      PairId pr = stack.back();
      stack.pop_back();
      const PairIv& iv = pair_interval(pr);
      led.record(Phase::search, pencil_degree, 4);
      if (!(iv.num - sIv * iv.den).contains_zero()) continue;
      if (!tree.pair_is_bottom(pr)) {
        for (PairId ch : tree.children_of(pr)) stack.push_back(ch);
        continue;
      }
      ++reached;
      if (opt.drop_pair && *opt.drop_pair == pr) {
        ++dropped;
        continue;
      }
      size_t li = cell_index.at(key2(pr.left, pr.right));
      build_list(li, pr);
      const auto& E = lists[li].entries;
      if (E.empty()) continue;
      ++searches;
      size_t lo = 0, hi = E.size();
      while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        auto [num, den] = phi_parts(E[mid].a, E[mid].t);
        led.record(Phase::search, pencil_degree, 4);
        led.record(Phase::search, den_degree, 3);
        ++probes;
        int c = (num - Sf[ks] * den).sign() * den.sign();
        if (c == 0) {
          flush_stats();
          return make_found(toA[E[mid].a], toT[E[mid].t], toS[ks]);
        }
        if (c < 0)
          lo = mid + 1;
        else
          hi = mid;
      }
    }
  }
  flush_stats();
  return make_not_found();
}

// Arbitrary predicate F and two parameterized curves. The good-fibers chain
// peels degenerate structure off the cleared substitution H(a, t, s); the
// residual H drives root lists over a hierarchy product on (A, T), with the
// locus of identically vanishing fibers swept separately.
Decision vanish_211_general(const Instance& inst, const PipelineOptions& opt) {
  const MultiPoly F = inst.F ? *inst.F : collinearity_poly();
  Decision dec;
  SignTestLedger& led = dec.ledger;
  nlohmann::json diag;
  diag["pipeline"] = "211-general";

  GoodFibersResult gf =
      good_fibers_reduce(F, inst.curveB, inst.curveC, inst.A, inst.T, inst.S, &led);
  diag["good_fibers"] = {{"branches", gf.branches},
                         {"certified", gf.good_fibers_certified},
                         {"irreducibility_warning", gf.irreducibility_warning},
                         {"notes", gf.notes}};
  if (gf.resolved) {
    Decision out = std::move(*gf.decision);
    out.ledger.merge(led);
    diag["resolved_by"] = "good-fibers";
    out.diagnostics = diag;
    return out;
  }

  const MultiPoly& H = gf.H;
  const int sdeg = std::max(H.degree(3), 1);
  const int hdeg = std::max(H.total_degree(), 1);

  auto make_found = [&](size_t ia, size_t it, size_t is) -> Decision {
    std::array<Rational, 2> b = inst.curveB.eval(inst.T[it]);
    std::array<Rational, 2> c = inst.curveC.eval(inst.S[is]);
    verify_vanish(F, inst.A[ia], b, c, led);
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
  auto make_not_found = [&]() -> Decision {
    dec.found = false;
    dec.diagnostics = diag;
    return std::move(dec);
  };

  size_t n = inst.n();
  size_t cap = std::max<size_t>(1, ceil_sqrt(std::max(inst.A.size(), inst.T.size())));
  size_t g = std::min(std::max<size_t>(opt.g.value_or(auto_g_line(n)), 1), cap);
  size_t h = std::min(std::max<size_t>(opt.h.value_or(auto_h_line(n, g)), 1), cap);
  diag["params"] = {{"n", n}, {"g", g}, {"h", h}, {"D", opt.D}, {"provider", opt.provider}};

  ProductTree21 tree = build_product_21(inst.A, inst.T, g, h, opt.D,
                                        provider_by_name(opt.provider), opt.seed, &led);
  const PartitionTree& PT = tree.planar();
  const ParamTree& QT = tree.curve();

  // Fibers H(a, t, .) = 0: any s completes the triple. The locus is swept
  // through the hierarchy, then candidate pairs are tested exactly.
  DegeneracyLocus psi = degeneracy_locus(H);
  uint64_t psi_pairs = 0;
  if (!psi.generators.empty()) {
    QuerySurface qs;
    qs.defining = psi.generators;
    qs.good_fibers_certified = psi.good_fibers;
    auto hit_cells = cells_reached_by_surface(tree, qs, &led, Phase::degeneracy, true);
    diag["psi"] = {{"reached", hit_cells.size()}, {"generators", psi.generators.size()}};
    for (const PairId& pr : hit_cells) {
      for (size_t i : PT.node(pr.left).cell.associated)
        for (size_t u : QT.node(pr.right).members) {
          ++psi_pairs;
          bool all_zero = true;
          std::array<Rational, 4> at{inst.A[i][0], inst.A[i][1], inst.T[u], Rational(0)};
          for (const MultiPoly& gen : psi.generators) {
            led.record(Phase::degeneracy, std::max(gen.total_degree(), 1), 3);
            if (!gen.eval(std::span<const Rational>(at.data(), at.size())).is_zero()) {
              all_zero = false;
              break;
            }
          }
          if (all_zero) {
            diag["resolved_by"] = "vanishing-fiber";
            diag["psi"]["pairs_tested"] = psi_pairs;
            return make_found(i, u, 0);
          }
        }
    }
    diag["psi"]["pairs_tested"] = psi_pairs;
  }

  // Root lists per bottom pair: the distinct real roots in s of each fiber,
  // merged by counted algebraic comparisons (root extraction itself is free).
  struct REntry {
    uint32_t a, t;
    RealAlgebraic root;
  };
  struct RList {
    bool built = false;
    std::vector<REntry> entries;
  };
  auto bpairs = tree.bottom_pairs();
  std::unordered_map<uint64_t, size_t> cell_index;
  for (size_t k = 0; k < bpairs.size(); ++k)
    cell_index.emplace(key2(bpairs[k].left, bpairs[k].right), k);
  std::vector<RList> lists(bpairs.size());
  uint64_t lists_built = 0, roots_total = 0;

  auto build_list = [&](size_t li, const PairId& pr) {
    RList& L = lists[li];
    if (L.built) return;
    L.built = true;
    ++lists_built;
    for (size_t i : PT.node(pr.left).cell.associated)
      for (size_t u : QT.node(pr.right).members) {
        MultiPoly fiber = H.eval_partial({{0, inst.A[i][0]}, {1, inst.A[i][1]}, {2, inst.T[u]}});
        UniPoly hs = fiber.to_unipoly(3);
        if (hs.is_zero())
          throw internal_error("degeneracy locus missed an identically vanishing fiber");
        for (auto& r : real_roots_distinct(hs))
          L.entries.push_back({static_cast<uint32_t>(i), static_cast<uint32_t>(u), std::move(r)});
      }
    std::sort(L.entries.begin(), L.entries.end(), [&](const REntry& x, const REntry& y) {
      led.record(Phase::sign_resolution, sdeg, 2);
      return RealAlgebraic::cmp(x.root, y.root) < 0;
    });
    roots_total += L.entries.size();
  };

  std::unordered_map<uint64_t, std::array<FloatInterval, 3>> boxes;
  auto box_of = [&](const PairId& pr) -> const std::array<FloatInterval, 3>& {
    uint64_t k = key2(pr.left, pr.right);
    auto it = boxes.find(k);
    if (it != boxes.end()) return it->second;
    const auto& bb = PT.node(pr.left).cell.bbox;
    std::array<FloatInterval, 3> v{FloatInterval::of(bb[0]), FloatInterval::of(bb[1]),
                                   FloatInterval::of(QT.node(pr.right).interval)};
    return boxes.emplace(k, v).first->second;
  };

  uint64_t reached = 0, searches = 0, probes = 0, dropped = 0;
  auto flush_stats = [&]() {
    diag["search"] = {{"reached_cells", reached}, {"searches", searches},
                      {"probes", probes},         {"lists_built", lists_built},
                      {"roots", roots_total},     {"dropped", dropped}};
  };

  std::vector<PairId> stack;
  for (size_t ks = 0; ks < inst.S.size(); ++ks) {
    FloatInterval sIv = FloatInterval::of(inst.S[ks]);
    stack.assign(1, PairId{0, 0});
    while (!stack.empty()) {
      PairId pr = stack.back();
      stack.pop_back();
      const auto& bx = box_of(pr);
      std::array<FloatInterval, 4> at{bx[0], bx[1], bx[2], sIv};
      led.record(Phase::search, hdeg, 4);
      if (!H.eval(std::span<const FloatInterval>(at.data(), at.size())).contains_zero()) continue;
      if (!tree.pair_is_bottom(pr)) {
        for (PairId ch : tree.children_of(pr)) stack.push_back(ch);
        continue;
      }
      ++reached;
      if (opt.drop_pair && *opt.drop_pair == pr) {
        ++dropped;
        continue;
      }
      size_t li = cell_index.at(key2(pr.left, pr.right));
      build_list(li, pr);
      const auto& E = lists[li].entries;
      if (E.empty()) continue;
      ++searches;
      size_t lo = 0, hi = E.size();
      while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        led.record(Phase::search, sdeg, 2);
        ++probes;
        int c = RealAlgebraic::cmp(E[mid].root, inst.S[ks]);
        if (c == 0) {
          flush_stats();
          return make_found(E[mid].a, E[mid].t, ks);
        }
        if (c < 0)
          lo = mid + 1;
        else
          hi = mid;
      }
    }
  }
  flush_stats();
  return make_not_found();
}

// Collinearity with both curves parameterized, through per-block line
// arrangements in the a-plane: H(a, t, s) is affine in a, so each (t, s)
// pair cuts a line. Blocks of g consecutive parameters on each side give
// (n/g)^2 arrangements of g^2 lines; four batched sign families (alpha and
// beta tables, pair slopes, vertex order) make every arrangement build almost
// free, and each a walks its crossed blocks with binary searches.
Decision collinear_211_alt(const Instance& inst, const PipelineOptions& opt) {
  Decision dec;
  SignTestLedger& led = dec.ledger;
  nlohmann::json diag;
  diag["pipeline"] = "211-alt";

  auto make_found = [&](size_t ia, size_t it, size_t is) -> Decision {
    std::array<Rational, 2> b = inst.curveB.eval(inst.T[it]);
    std::array<Rational, 2> c = inst.curveC.eval(inst.S[is]);
    verify_collinear(inst.A[ia], b, c, led);
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
  auto make_not_found = [&]() -> Decision {
    dec.found = false;
    dec.diagnostics = diag;
    return std::move(dec);
  };

  const std::vector<std::array<Rational, 2>>& A = inst.A;
  const std::vector<Rational>& T = inst.T;
  const std::vector<Rational>& S = inst.S;
  if (A.empty() || T.empty() || S.empty()) {
    diag["resolved_by"] = "empty-input";
    return make_not_found();
  }

  SubstitutionResult sub = substitute_curves(collinearity_poly(), inst.curveB, inst.curveC);
  const MultiPoly& H = sub.H;
  if (H.degree(0) > 1 || H.degree(1) > 1)
    throw internal_error("cleared collinearity form is not affine in the point");
  const int hdeg = std::max(H.total_degree(), 1);

  auto coef_of = [&](const MultiPoly& p, size_t var) {
    auto cs = p.coefficients_in(var);
    if (cs.size() > 1) return std::make_pair(cs[1], cs[0]);
    return std::make_pair(MultiPoly::constant(p.vars(), Rational(0)), cs.empty() ? p : cs[0]);
  };
  auto [alpha, rest] = coef_of(H, 0);
  auto [beta, gamma] = coef_of(rest, 1);
  if (alpha.degree(1) > 0 || beta.degree(0) > 0)
    throw internal_error("affine coefficient split failed");

  auto eval_ts = [&](const MultiPoly& p, const Rational& t, const Rational& s) {
    std::array<Rational, 4> at{Rational(0), Rational(0), t, s};
    return p.eval(std::span<const Rational>(at.data(), at.size()));
  };
  auto eval_ts_iv = [&](const MultiPoly& p, const FloatInterval& t, const FloatInterval& s) {
    std::array<FloatInterval, 4> at{FloatInterval::point(0), FloatInterval::point(0), t, s};
    return p.eval(std::span<const FloatInterval>(at.data(), at.size()));
  };

  auto ordT = sorted_order(T, led, Phase::partition_build);
  auto ordS = sorted_order(S, led, Phase::partition_build);

  // Degenerate parameter lines: (t, s) with alpha = beta = gamma = 0 put
  // every a on the triple. Common roots over s per t cover the whole grid.
  const int cgdeg = std::max({alpha.degree(3), beta.degree(3), gamma.degree(3), 1});
  size_t degenerate_lines = 0;
  for (size_t u = 0; u < T.size(); ++u) {
    MultiPoly at = alpha.eval_partial({{2, T[u]}});
    MultiPoly bt = beta.eval_partial({{2, T[u]}});
    MultiPoly gt = gamma.eval_partial({{2, T[u]}});
    MultiPoly cg = MultiPoly::gcd(MultiPoly::gcd(at, bt), gt);
    led.record(Phase::degeneracy, cgdeg, 2);
    if (cg.is_zero()) {
      diag["resolved_by"] = "degenerate-parameter";
      return make_found(0, u, 0);
    }
    UniPoly cgs = cg.to_unipoly(3);
    if (cgs.degree() < 1) continue;
    for (const auto& r : real_roots_distinct(cgs)) {
      auto hits = find_root_matches(ordS, S, r, cgs.degree(), led, Phase::degeneracy);
      if (!hits.empty()) {
        ++degenerate_lines;
        diag["resolved_by"] = "degenerate-line";
        return make_found(0, u, hits.front());
      }
    }
  }
  diag["degenerate_lines"] = degenerate_lines;

  size_t n = inst.n();
  size_t g = std::max<size_t>(1, std::min({opt.g.value_or(auto_g_alt(n)), T.size(), S.size()}));
  diag["params"] = {{"n", n}, {"g", g}};

  struct Block {
    std::vector<size_t> idx;  // global indices, ascending by value
    RatInterval range;
  };
  auto make_blocks = [&](const std::vector<size_t>& ord, const std::vector<Rational>& vals) {
    std::vector<Block> out;
    for (size_t p = 0; p < ord.size(); p += g) {
      Block b;
      for (size_t q = p; q < std::min(p + g, ord.size()); ++q) b.idx.push_back(ord[q]);
      b.range = RatInterval(vals[b.idx.front()], vals[b.idx.back()]);
      out.push_back(std::move(b));
    }
    return out;
  };
  std::vector<Block> TB = make_blocks(ordT, T), SB = make_blocks(ordS, S);

  // Exact line coefficients, cached per touched (t, s) pair.
  std::unordered_map<uint64_t, std::array<Rational, 3>> line_cache;
  auto line_of = [&](size_t ti, size_t si) -> const std::array<Rational, 3>& {
    uint64_t k = key2(static_cast<uint32_t>(ti), static_cast<uint32_t>(si));
    auto it = line_cache.find(k);
    if (it == line_cache.end())
      it = line_cache
               .emplace(k, std::array<Rational, 3>{eval_ts(alpha, T[ti], S[si]),
                                                   eval_ts(beta, T[ti], S[si]),
                                                   eval_ts(gamma, T[ti], S[si])})
               .first;
    return it->second;
  };

  auto run_batch = [&](const std::vector<PLItem>& pts, const std::vector<PLItem>& surs,
                       const IncidenceFamily& fam, uint64_t seed, const char* name) {
    PLConfig cfg;
    try {
      cfg = solve_parameters(pts.size(), surs.size());
    } catch (const Error&) {
    }
    LocateStats stats;
    auto blocks = batched_locate(pts, surs, fam, cfg, &led, seed, &stats);
    verify_blocks(blocks, pts, surs, fam, 0.01, seed + 1, &led);
    diag["batches"][name] = nlohmann::json::parse(stats.to_json());
    return BlockSignLookup(blocks, pts.size(), surs.size());
  };

  // Batch 1 and 2: full sign tables of alpha and beta over T x S.
  std::vector<PLItem> titems(T.size()), sitems(S.size());
  for (size_t i = 0; i < T.size(); ++i)
    titems[i] = {static_cast<uint32_t>(i), {T[i]}, {static_cast<uint32_t>(i), 0}};
  for (size_t k = 0; k < S.size(); ++k)
    sitems[k] = {static_cast<uint32_t>(k), {S[k]}, {static_cast<uint32_t>(k), 0}};

  auto table_family = [&](const MultiPoly& p) {
    IncidenceFamily f;
    f.degree = std::max(p.total_degree(), 1);
    f.arity = 2;
    f.sign_exact = [&](const PLItem& pi, const PLItem& si) {
      return eval_ts(p, T[pi.payload.first], S[si.payload.first]).sign();
    };
    f.range = [&](std::span<const FloatInterval> bp, std::span<const FloatInterval> bs) {
      return eval_ts_iv(p, bp[0], bs[0]);
    };
    return f;
  };
  IncidenceFamily famA = table_family(alpha), famB = table_family(beta);
  BlockSignLookup lookA = run_batch(titems, sitems, famA, opt.seed + 0x11, "alpha");
  BlockSignLookup lookB = run_batch(titems, sitems, famB, opt.seed + 0x21, "beta");

  // Batch 3: slope determinants for same-block line pairs.
  std::vector<PLItem> tpairs, spairs;
  std::unordered_map<uint64_t, uint32_t> tpid, spid;
  for (const Block& b : TB)
    for (size_t i : b.idx)
      for (size_t j : b.idx) {
        auto id = static_cast<uint32_t>(tpairs.size());
        tpid.emplace(key2(static_cast<uint32_t>(i), static_cast<uint32_t>(j)), id);
        tpairs.push_back({id, {T[i], T[j]}, {static_cast<uint32_t>(i), static_cast<uint32_t>(j)}});
      }
  for (const Block& b : SB)
    for (size_t i : b.idx)
      for (size_t j : b.idx) {
        auto id = static_cast<uint32_t>(spairs.size());
        spid.emplace(key2(static_cast<uint32_t>(i), static_cast<uint32_t>(j)), id);
        spairs.push_back({id, {S[i], S[j]}, {static_cast<uint32_t>(i), static_cast<uint32_t>(j)}});
      }
  const int ldeg = std::max({alpha.total_degree(), beta.total_degree(), gamma.total_degree(), 1});
  IncidenceFamily famD;
  famD.degree = 2 * ldeg;
  famD.arity = 4;
  famD.sign_exact = [&](const PLItem& p, const PLItem& s) {
    const auto& l1 = line_of(p.payload.first, s.payload.first);
    const auto& l2 = line_of(p.payload.second, s.payload.second);
    return (l1[0] * l2[1] - l2[0] * l1[1]).sign();
  };
  famD.range = [&](std::span<const FloatInterval> bp, std::span<const FloatInterval> bs) {
    return eval_ts_iv(alpha, bp[0], bs[0]) * eval_ts_iv(beta, bp[1], bs[1]) -
           eval_ts_iv(alpha, bp[1], bs[1]) * eval_ts_iv(beta, bp[0], bs[0]);
  };
  BlockSignLookup lookD = run_batch(tpairs, spairs, famD, opt.seed + 0x31, "slope");

  // Batch 4: lexicographic vertex order for same-block line quadruples.
  // Convention: a missing first vertex sorts after everything, a missing
  // second vertex before, both missing compare equal.
  std::vector<PLItem> tquads, squads;
  std::vector<size_t> tqbase(TB.size()), sqbase(SB.size());
  auto build_quads = [](const std::vector<Block>& blocks, const std::vector<Rational>& vals,
                        std::vector<PLItem>& out, std::vector<size_t>& base) {
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
      base[bi] = out.size();
      size_t m = blocks[bi].idx.size();
      for (size_t k1 = 0; k1 < m; ++k1)
        for (size_t k2 = 0; k2 < m; ++k2)
          for (size_t k3 = 0; k3 < m; ++k3)
            for (size_t k4 = 0; k4 < m; ++k4) {
              auto id = static_cast<uint32_t>(out.size());
              uint32_t flat = static_cast<uint32_t>(((k1 * m + k2) * m + k3) * m + k4);
              out.push_back({id,
                             {vals[blocks[bi].idx[k1]], vals[blocks[bi].idx[k2]],
                              vals[blocks[bi].idx[k3]], vals[blocks[bi].idx[k4]]},
                             {static_cast<uint32_t>(bi), flat}});
            }
    }
  };
  build_quads(TB, T, tquads, tqbase);
  build_quads(SB, S, squads, sqbase);

  auto vertex_cmp_exact = [&](const std::array<Rational, 3>& l1, const std::array<Rational, 3>& l2,
                              const std::array<Rational, 3>& l3,
                              const std::array<Rational, 3>& l4) -> int {
    Rational d12 = l1[0] * l2[1] - l2[0] * l1[1];
    Rational d34 = l3[0] * l4[1] - l4[0] * l3[1];
    int s12 = d12.sign(), s34 = d34.sign();
    if (s12 == 0 && s34 == 0) return 0;
    if (s12 == 0) return 1;
    if (s34 == 0) return -1;
    Rational uxn = l1[1] * l2[2] - l2[1] * l1[2];
    Rational vxn = l3[1] * l4[2] - l4[1] * l3[2];
    int cx = (uxn * d34 - vxn * d12).sign() * s12 * s34;
    if (cx != 0) return cx;
    Rational uyn = l1[2] * l2[0] - l2[2] * l1[0];
    Rational vyn = l3[2] * l4[0] - l4[2] * l3[0];
    return (uyn * d34 - vyn * d12).sign() * s12 * s34;
  };

  IncidenceFamily famV;
  famV.degree = 4 * ldeg + 1;
  famV.arity = 8;
  famV.sign_exact = [&](const PLItem& p, const PLItem& s) {
    size_t tb = p.payload.first, sb = s.payload.first;
    size_t mt = TB[tb].idx.size(), ms = SB[sb].idx.size();
    size_t tf = p.payload.second, sf = s.payload.second;
    std::array<size_t, 4> tk, sk;
    for (int q = 3; q >= 0; --q) {
      tk[q] = tf % mt;
      tf /= mt;
      sk[q] = sf % ms;
      sf /= ms;
    }
    return vertex_cmp_exact(line_of(TB[tb].idx[tk[0]], SB[sb].idx[sk[0]]),
                            line_of(TB[tb].idx[tk[1]], SB[sb].idx[sk[1]]),
                            line_of(TB[tb].idx[tk[2]], SB[sb].idx[sk[2]]),
                            line_of(TB[tb].idx[tk[3]], SB[sb].idx[sk[3]]));
  };
  famV.range = [&](std::span<const FloatInterval> bp, std::span<const FloatInterval> bs) {
    auto line_iv = [&](const FloatInterval& t, const FloatInterval& s) {
      return std::array<FloatInterval, 3>{eval_ts_iv(alpha, t, s), eval_ts_iv(beta, t, s),
                                          eval_ts_iv(gamma, t, s)};
    };
    auto l1 = line_iv(bp[0], bs[0]), l2 = line_iv(bp[1], bs[1]);
    auto l3 = line_iv(bp[2], bs[2]), l4 = line_iv(bp[3], bs[3]);
    FloatInterval d12 = l1[0] * l2[1] - l2[0] * l1[1];
    FloatInterval d34 = l3[0] * l4[1] - l4[0] * l3[1];
    int s12 = d12.determined_sign(), s34 = d34.determined_sign();
    if (s12 == 0 || s34 == 0) return FloatInterval(-1.0, 1.0);
    FloatInterval uxn = l1[1] * l2[2] - l2[1] * l1[2];
    FloatInterval vxn = l3[1] * l4[2] - l4[1] * l3[2];
    FloatInterval cx = uxn * d34 - vxn * d12;
    if (s12 * s34 < 0) cx = FloatInterval(-cx.hi, -cx.lo);
    if (cx.determined_sign() != 0) return cx;
    return FloatInterval(-1.0, 1.0);
  };
  BlockSignLookup lookV = run_batch(tquads, squads, famV, opt.seed + 0x41, "vertex");

  // Lazy per-block-pair arrangements. Lines are local ids a * ms + b over
  // the block's parameter grid; the sweep keeps the bottom-to-top order per
  // slab. All structural decisions read batch lookups; only parallel-offset
  // ties and vertical intercept sorts charge exact tests.
  struct Arrangement {
    bool built = false;
    size_t mt = 0, ms = 0;
    std::vector<int> sa, sb;                      // alpha/beta signs per local line
    std::vector<uint32_t> verticals;              // beta = 0, alpha != 0, by intercept
    std::vector<std::pair<uint32_t, uint32_t>> groups;  // one vertex per sweep group
    std::vector<std::vector<uint32_t>> slabs;     // line order per slab
  };
  std::unordered_map<uint64_t, Arrangement> arrs;
  uint64_t arrangements_built = 0;

  auto tglob = [&](size_t bi, uint32_t lid, const Arrangement& ar) {
    return TB[bi].idx[lid / ar.ms];
  };
  auto sglob = [&](size_t bj, uint32_t lid, const Arrangement& ar) {
    return SB[bj].idx[lid % ar.ms];
  };

  auto get_arr = [&](size_t bi, size_t bj) -> Arrangement& {
    Arrangement& ar = arrs[key2(static_cast<uint32_t>(bi), static_cast<uint32_t>(bj))];
    if (ar.built) return ar;
    ar.built = true;
    ++arrangements_built;
    ar.mt = TB[bi].idx.size();
    ar.ms = SB[bj].idx.size();
    size_t nl = ar.mt * ar.ms;
    ar.sa.resize(nl);
    ar.sb.resize(nl);
    std::vector<uint32_t> nonvert;
    for (uint32_t lid = 0; lid < nl; ++lid) {
      size_t ti = tglob(bi, lid, ar), si = sglob(bj, lid, ar);
      ar.sa[lid] = lookA.sign(static_cast<uint32_t>(ti), static_cast<uint32_t>(si));
      ar.sb[lid] = lookB.sign(static_cast<uint32_t>(ti), static_cast<uint32_t>(si));
      if (ar.sa[lid] == 0 && ar.sb[lid] == 0) continue;  // empty line: gamma != 0 here
      if (ar.sb[lid] == 0)
        ar.verticals.push_back(lid);
      else
        nonvert.push_back(lid);
    }
    std::sort(ar.verticals.begin(), ar.verticals.end(), [&](uint32_t x, uint32_t y) {
      led.record(Phase::sign_resolution, 2 * ldeg, 4);
      const auto& lx = line_of(tglob(bi, x, ar), sglob(bj, x, ar));
      const auto& ly = line_of(tglob(bi, y, ar), sglob(bj, y, ar));
      int c = (ly[2] * lx[0] - lx[2] * ly[0]).sign() * ar.sa[x] * ar.sa[y];
      if (c != 0) return c < 0;
      return x < y;
    });
    auto dsign = [&](uint32_t x, uint32_t y) {
      uint32_t pp = tpid.at(key2(static_cast<uint32_t>(tglob(bi, x, ar)),
                                 static_cast<uint32_t>(tglob(bi, y, ar))));
      uint32_t ss = spid.at(key2(static_cast<uint32_t>(sglob(bj, x, ar)),
                                 static_cast<uint32_t>(sglob(bj, y, ar))));
      return lookD.sign(pp, ss);
    };
    // Bottom-to-top at x -> -inf: descending slope; parallel ties by offset.
    std::sort(nonvert.begin(), nonvert.end(), [&](uint32_t x, uint32_t y) {
      int slope_cmp = -dsign(x, y) * ar.sb[x] * ar.sb[y];
      if (slope_cmp != 0) return slope_cmp > 0;
      led.record(Phase::sign_resolution, 2 * ldeg, 4);
      const auto& lx = line_of(tglob(bi, x, ar), sglob(bj, x, ar));
      const auto& ly = line_of(tglob(bi, y, ar), sglob(bj, y, ar));
      int c = (ly[2] * lx[1] - lx[2] * ly[1]).sign() * ar.sb[x] * ar.sb[y];
      if (c != 0) return c < 0;
      return x < y;
    });
    std::vector<std::pair<uint32_t, uint32_t>> verts;
    for (size_t p = 0; p < nonvert.size(); ++p)
      for (size_t q = p + 1; q < nonvert.size(); ++q)
        if (dsign(nonvert[p], nonvert[q]) != 0) verts.push_back({nonvert[p], nonvert[q]});
    auto vidT = [&](const std::pair<uint32_t, uint32_t>& v1,
                    const std::pair<uint32_t, uint32_t>& v2) {
      size_t m = ar.mt;
      size_t k1 = v1.first / ar.ms, k2 = v1.second / ar.ms;
      size_t k3 = v2.first / ar.ms, k4 = v2.second / ar.ms;
      return static_cast<uint32_t>(tqbase[bi] + ((k1 * m + k2) * m + k3) * m + k4);
    };
    auto vidS = [&](const std::pair<uint32_t, uint32_t>& v1,
                    const std::pair<uint32_t, uint32_t>& v2) {
      size_t m = ar.ms;
      size_t k1 = v1.first % ar.ms, k2 = v1.second % ar.ms;
      size_t k3 = v2.first % ar.ms, k4 = v2.second % ar.ms;
      return static_cast<uint32_t>(sqbase[bj] + ((k1 * m + k2) * m + k3) * m + k4);
    };
    auto vcmp = [&](const std::pair<uint32_t, uint32_t>& v1,
                    const std::pair<uint32_t, uint32_t>& v2) {
      return lookV.sign(vidT(v1, v2), vidS(v1, v2));
    };
    std::sort(verts.begin(), verts.end(),
              [&](const auto& v1, const auto& v2) {
                int c = vcmp(v1, v2);
                if (c != 0) return c < 0;
                return v1 < v2;
              });
    // Sweep: per group of concurrent vertices, the involved lines occupy a
    // contiguous run of the current order and the crossing reverses it.
    std::vector<uint32_t> order = nonvert;
    std::vector<size_t> pos(nl, SIZE_MAX);
    for (size_t p = 0; p < order.size(); ++p) pos[order[p]] = p;
    ar.slabs.push_back(order);
    size_t gi = 0;
    while (gi < verts.size()) {
      size_t gj = gi + 1;
      while (gj < verts.size() && vcmp(verts[gi], verts[gj]) == 0) ++gj;
      std::unordered_set<uint32_t> moving;
      for (size_t q = gi; q < gj; ++q) {
        moving.insert(verts[q].first);
        moving.insert(verts[q].second);
      }
      size_t lo = SIZE_MAX, hi = 0;
      for (uint32_t lid : moving) {
        lo = std::min(lo, pos[lid]);
        hi = std::max(hi, pos[lid]);
      }
      if (hi - lo + 1 != moving.size())
        throw internal_error("concurrent crossing lines not contiguous in the sweep order");
      std::reverse(order.begin() + static_cast<ptrdiff_t>(lo),
                   order.begin() + static_cast<ptrdiff_t>(hi) + 1);
      for (size_t p = lo; p <= hi; ++p) pos[order[p]] = p;
      ar.groups.push_back(verts[gi]);
      ar.slabs.push_back(order);
      gi = gj;
    }
    return ar;
  };

  const int vdeg = 2 * ldeg + 1;
  uint64_t blocks_visited = 0, block_searches = 0, probes = 0;

  // Locates a in the (bi, bj) arrangement; returns the line it sits on.
  auto search_block = [&](size_t ai, size_t bi, size_t bj) -> std::optional<uint32_t> {
    Arrangement& ar = get_arr(bi, bj);
    const Rational& a1 = A[ai][0];
    const Rational& a2 = A[ai][1];
    {
      size_t lo = 0, hi = ar.verticals.size();
      while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        uint32_t lid = ar.verticals[mid];
        const auto& l = line_of(tglob(bi, lid, ar), sglob(bj, lid, ar));
        led.record(Phase::search, hdeg, 4);
        ++probes;
        int c = (a1 * l[0] + l[2]).sign() * ar.sa[lid];
        if (c == 0) return lid;
        if (c > 0)
          lo = mid + 1;
        else
          hi = mid;
      }
    }
    if (ar.slabs.empty() || ar.slabs[0].empty()) return std::nullopt;
    // Slab: count vertex groups lexicographically before a.
    size_t lo = 0, hi = ar.groups.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      auto [p, q] = ar.groups[mid];
      const auto& lp = line_of(tglob(bi, p, ar), sglob(bj, p, ar));
      const auto& lq = line_of(tglob(bi, q, ar), sglob(bj, q, ar));
      Rational d = lp[0] * lq[1] - lq[0] * lp[1];
      int sd = d.sign();
      Rational uxn = lp[1] * lq[2] - lq[1] * lp[2];
      led.record(Phase::search, vdeg, 4);
      ++probes;
      int cx = (uxn - a1 * d).sign() * sd;  // sign(vx - a1)
      bool before;
      if (cx != 0) {
        before = cx < 0;
      } else {
        Rational uyn = lp[2] * lq[0] - lq[2] * lp[0];
        led.record(Phase::search, vdeg, 4);
        ++probes;
        before = (uyn - a2 * d).sign() * sd < 0;
      }
      if (before)
        lo = mid + 1;
      else
        hi = mid;
    }
    const std::vector<uint32_t>& order = ar.slabs[lo];
    size_t plo = 0, phi = order.size();
    while (plo < phi) {
      size_t mid = (plo + phi) / 2;
      uint32_t lid = order[mid];
      const auto& l = line_of(tglob(bi, lid, ar), sglob(bj, lid, ar));
      led.record(Phase::search, hdeg, 4);
      ++probes;
      int c = (l[0] * a1 + l[1] * a2 + l[2]).sign() * ar.sb[lid];
      if (c == 0) return lid;
      if (c > 0)
        plo = mid + 1;
      else
        phi = mid;
    }
    return std::nullopt;
  };

  // Per point: descend the block grid under the interval test, search leaves.
  struct Rect {
    size_t i0, i1, j0, j1;
  };
  for (size_t ai = 0; ai < A.size(); ++ai) {
    FloatInterval a1 = FloatInterval::of(A[ai][0]), a2 = FloatInterval::of(A[ai][1]);
    std::vector<Rect> stack{{0, TB.size(), 0, SB.size()}};
    while (!stack.empty()) {
      Rect rc = stack.back();
      stack.pop_back();
      FloatInterval ti = FloatInterval::of(
          RatInterval(TB[rc.i0].range.lo, TB[rc.i1 - 1].range.hi));
      FloatInterval si = FloatInterval::of(
          RatInterval(SB[rc.j0].range.lo, SB[rc.j1 - 1].range.hi));
      std::array<FloatInterval, 4> bx{a1, a2, ti, si};
      led.record(Phase::search, hdeg, 4);
      if (!H.eval(std::span<const FloatInterval>(bx.data(), bx.size())).contains_zero()) continue;
      size_t di = rc.i1 - rc.i0, dj = rc.j1 - rc.j0;
      if (di == 1 && dj == 1) {
        ++blocks_visited;
        ++block_searches;
        if (auto lid = search_block(ai, rc.i0, rc.j0)) {
          Arrangement& ar = arrs[key2(static_cast<uint32_t>(rc.i0), static_cast<uint32_t>(rc.j0))];
          diag["search"] = {{"blocks_visited", blocks_visited},
                            {"block_searches", block_searches},
                            {"probes", probes},
                            {"arrangements_built", arrangements_built}};
          return make_found(ai, tglob(rc.i0, *lid, ar), sglob(rc.j0, *lid, ar));
        }
        continue;
      }
      if (di >= dj) {
        size_t mid = rc.i0 + di / 2;
        stack.push_back({rc.i0, mid, rc.j0, rc.j1});
        stack.push_back({mid, rc.i1, rc.j0, rc.j1});
      } else {
        size_t mid = rc.j0 + dj / 2;
        stack.push_back({rc.i0, rc.i1, rc.j0, mid});
        stack.push_back({rc.i0, rc.i1, mid, rc.j1});
      }
    }
  }
  diag["search"] = {{"blocks_visited", blocks_visited},
                    {"block_searches", block_searches},
                    {"probes", probes},
                    {"arrangements_built", arrangements_built}};
  return make_not_found();
}

namespace {

// Working state for the dimension-reduction loop: point sets still in
// dimension k, plus the two hyperplane coefficient vectors (c0, c1..ck).
struct HdState {
  size_t k = 0;
  std::vector<std::vector<Rational>> A, B, C;
  std::vector<Rational> h1, h2;
};

Rational hplane_eval(const std::vector<Rational>& h, const std::vector<Rational>& p) {
  Rational v = h[0];
  for (size_t i = 0; i < p.size(); ++i) v += h[i + 1] * p[i];
  return v;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational v(0);
  for (size_t i = 0; i < a.size(); ++i) v += a[i] * b[i];
  return v;
}

// One projection step k -> k-1. Drops coordinate m after a central projection
// from a random center on h1 with h2, or a parallel projection when the
// hyperplanes do not meet. nullopt asks the caller to redraw.
std::optional<HdState> project_step(const HdState& st, SplitMix64& rng, SignTestLedger& led) {
  size_t k = st.k;
  std::vector<Rational> n1(st.h1.begin() + 1, st.h1.end());
  std::vector<Rational> n2(st.h2.begin() + 1, st.h2.end());
  size_t j1 = SIZE_MAX;
  for (size_t j = 0; j < k; ++j)
    if (!n1[j].is_zero()) {
      j1 = j;
      break;
    }
  if (j1 == SIZE_MAX) throw input_error("degenerate hyperplane: zero normal");
  Rational f = n2[j1] / n1[j1];
  bool parallel = true;
  for (size_t j = 0; j < k && parallel; ++j) {
    led.record(Phase::degeneracy, 1, 2);
    if (Rational::cmp(n2[j], n1[j] * f) != 0) parallel = false;
  }

  size_t m = SIZE_MAX;
  std::vector<std::vector<Rational>> imgs;
  auto all_points = [&](auto&& fn) {
    for (const auto& p : st.A) fn(p);
    for (const auto& p : st.B) fn(p);
    for (const auto& p : st.C) fn(p);
  };
  Rational w(0);

  if (parallel) {
    // Distinct parallel hyperplanes: project along a shared direction.
    std::vector<Rational> v(k);
    bool ok = false;
    for (int tries = 0; tries < 8 && !ok; ++tries) {
      std::vector<Rational> r(k);
      for (auto& x : r) x = Rational(static_cast<long>(rng.uniform(-(1 << 20), 1 << 20)));
      Rational pn = dot(n1, r) / dot(n1, n1);
      for (size_t j = 0; j < k; ++j) {
        v[j] = r[j] - n1[j] * pn;
        if (!v[j].is_zero()) ok = true;
      }
    }
    if (!ok) return std::nullopt;
    for (size_t j = 0; j < k; ++j)
      if (!v[j].is_zero()) {
        m = j;
        break;
      }
    all_points([&](const std::vector<Rational>& p) {
      Rational lam = p[m] / v[m];
      std::vector<Rational> q;
      q.reserve(k - 1);
      for (size_t j = 0; j < k; ++j)
        if (j != m) q.push_back(p[j] - v[j] * lam);
      imgs.push_back(std::move(q));
    });
  } else {
    // Center on the intersection flat: random free coordinates, exact solve.
    size_t j2 = SIZE_MAX;
    std::vector<Rational> n2e(k);
    Rational r2 = -st.h2[0] + f * st.h1[0];
    for (size_t j = 0; j < k; ++j) n2e[j] = n2[j] - n1[j] * f;
    for (size_t j = 0; j < k; ++j)
      if (!n2e[j].is_zero()) {
        j2 = j;
        break;
      }
    if (j2 == SIZE_MAX) return std::nullopt;
    std::vector<Rational> q(k);
    for (size_t j = 0; j < k; ++j)
      if (j != j1 && j != j2)
        q[j] = Rational(static_cast<long>(rng.uniform(-(1 << 24), 1 << 24)));
    Rational acc2 = r2;
    for (size_t j = 0; j < k; ++j)
      if (j != j1 && j != j2) acc2 -= n2e[j] * q[j];
    q[j2] = acc2 / n2e[j2];
    Rational acc1 = -st.h1[0];
    for (size_t j = 0; j < k; ++j)
      if (j != j1) acc1 -= n1[j] * q[j];
    q[j1] = acc1 / n1[j1];

    // Coordinate to drop: every point must leave the center's level set.
    std::vector<size_t> perm(k);
    for (size_t j = 0; j < k; ++j) perm[j] = j;
    for (size_t j = k; j > 1; --j)
      std::swap(perm[j - 1], perm[rng.uniform(0, static_cast<int64_t>(j) - 1)]);
    for (size_t cand : perm) {
      bool ok = true;
      all_points([&](const std::vector<Rational>& p) {
        if (!ok) return;
        led.record(Phase::degeneracy, 1, 2);
        if (Rational::cmp(p[cand], q[cand]) == 0) ok = false;
      });
      if (ok) {
        m = cand;
        break;
      }
    }
    if (m == SIZE_MAX) return std::nullopt;
    w = q[m] + Rational(static_cast<long>(rng.uniform(1, 1 << 16)));
    all_points([&](const std::vector<Rational>& p) {
      Rational lam = (w - q[m]) / (p[m] - q[m]);
      std::vector<Rational> img;
      img.reserve(k - 1);
      for (size_t j = 0; j < k; ++j)
        if (j != m) img.push_back(q[j] + (p[j] - q[j]) * lam);
      imgs.push_back(std::move(img));
    });
  }

  // Fold x_m = w into the constants and drop the coefficient.
  auto fold = [&](const std::vector<Rational>& h) {
    std::vector<Rational> out;
    out.reserve(h.size() - 1);
    out.push_back(h[0] + h[m + 1] * w);
    for (size_t j = 0; j < k; ++j)
      if (j != m) out.push_back(h[j + 1]);
    return out;
  };

  HdState next;
  next.k = k - 1;
  next.h1 = fold(st.h1);
  next.h2 = fold(st.h2);
  size_t at = 0;
  for (size_t i = 0; i < st.A.size(); ++i) next.A.push_back(imgs[at++]);
  for (size_t i = 0; i < st.B.size(); ++i) next.B.push_back(imgs[at++]);
  for (size_t i = 0; i < st.C.size(); ++i) next.C.push_back(imgs[at++]);

  // Injectivity on the union: originally distinct points must stay distinct.
  std::vector<size_t> ord = iota_vec(imgs.size());
  auto lex_cmp = [&](size_t x, size_t y) {
    for (size_t j = 0; j < k - 1; ++j) {
      led.record(Phase::degeneracy, 1, 2);
      int c = Rational::cmp(imgs[x][j], imgs[y][j]);
      if (c != 0) return c;
    }
    return 0;
  };
  std::sort(ord.begin(), ord.end(), [&](size_t x, size_t y) { return lex_cmp(x, y) < 0; });
  auto orig = [&](size_t i) -> const std::vector<Rational>& {
    if (i < st.A.size()) return st.A[i];
    i -= st.A.size();
    if (i < st.B.size()) return st.B[i];
    return st.C[i - st.B.size()];
  };
  for (size_t i = 1; i < ord.size(); ++i) {
    if (lex_cmp(ord[i - 1], ord[i]) != 0) continue;
    const auto &p = orig(ord[i - 1]), &q = orig(ord[i]);
    bool same = true;
    for (size_t j = 0; j < k && same; ++j) {
      led.record(Phase::degeneracy, 1, 2);
      same = Rational::cmp(p[j], q[j]) == 0;
    }
    if (!same) return std::nullopt;
  }
  return next;
}

}  // namespace

// Points on two hyperplanes in R^d: central projections reduce to the planar
// two-lines case, and any planar witness is re-verified in R^d, redrawing the
// projection when it was an artifact.
Decision collinear_highdim(const Instance& inst, const PipelineOptions& opt) {
  if (!inst.highdim) throw input_error("collinear_highdim: no d-dimensional data attached");
  const HighDimInstance& hd = *inst.highdim;
  const auto d = static_cast<size_t>(hd.d);
  if (d < 3) throw input_error("collinear_highdim: need d >= 3");
  for (const auto* set : {&hd.A, &hd.B, &hd.C})
    for (const auto& p : *set)
      if (p.size() != d) throw input_error("collinear_highdim: point dimension mismatch");
  if (hd.h1.size() != d + 1 || hd.h2.size() != d + 1)
    throw input_error("collinear_highdim: hyperplane coefficient size mismatch");

  Decision dec;
  SignTestLedger& led = dec.ledger;
  nlohmann::json diag;
  diag["pipeline"] = "highdim";
  diag["d"] = d;

  if (hd.A.empty() || hd.B.empty() || hd.C.empty()) {
    diag["resolved_by"] = "empty-input";
    dec.diagnostics = diag;
    return dec;
  }

  // Regime checks: distinct hyperplanes, B on h1, C on h2, A clear of both,
  // and B, C clear of the intersection flat.
  {
    bool proportional = true;
    for (size_t i = 0; i < d + 1 && proportional; ++i)
      for (size_t j = i + 1; j < d + 1 && proportional; ++j) {
        led.record(Phase::degeneracy, 2, 4);
        if (!(hd.h1[i] * hd.h2[j] - hd.h1[j] * hd.h2[i]).is_zero()) proportional = false;
      }
    if (proportional)
      throw input_error("unsupported regime: the two hyperplanes coincide");
    for (const auto& b : hd.B) {
      led.record(Phase::degeneracy, 1, static_cast<int>(d));
      if (!hplane_eval(hd.h1, b).is_zero())
        throw input_error("unsupported regime: a B point is off its hyperplane");
      led.record(Phase::degeneracy, 1, static_cast<int>(d));
      if (hplane_eval(hd.h2, b).is_zero())
        throw input_error("unsupported regime: a B point lies on both hyperplanes");
    }
    for (const auto& c : hd.C) {
      led.record(Phase::degeneracy, 1, static_cast<int>(d));
      if (!hplane_eval(hd.h2, c).is_zero())
        throw input_error("unsupported regime: a C point is off its hyperplane");
      led.record(Phase::degeneracy, 1, static_cast<int>(d));
      if (hplane_eval(hd.h1, c).is_zero())
        throw input_error("unsupported regime: a C point lies on both hyperplanes");
    }
    for (const auto& a : hd.A) {
      led.record(Phase::degeneracy, 1, static_cast<int>(d));
      led.record(Phase::degeneracy, 1, static_cast<int>(d));
      if (hplane_eval(hd.h1, a).is_zero() || hplane_eval(hd.h2, a).is_zero())
        throw input_error("unsupported regime: an A point touches a hyperplane");
    }
  }

  int retries = 0;
  const int max_attempts = 16;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    SplitMix64 rng = SplitMix64(opt.seed).derive(0xd1a0 + static_cast<uint64_t>(attempt));
    HdState st;
    st.k = d;
    st.A = hd.A;
    st.B = hd.B;
    st.C = hd.C;
    st.h1 = hd.h1;
    st.h2 = hd.h2;
    bool bad = false;
    while (st.k > 2) {
      auto next = project_step(st, rng, led);
      if (!next) {
        bad = true;
        break;
      }
      st = std::move(*next);
    }
    if (bad) {
      ++retries;
      continue;
    }

    // Planar stage: map h2's line to the x-axis by an affine shear, then
    // parameterize h1's line.
    const Rational &f0 = st.h2[0], &f1 = st.h2[1], &f2 = st.h2[2];
    auto shear = [&](const std::vector<Rational>& p) -> std::array<Rational, 2> {
      if (!f2.is_zero()) return {p[0], f0 + f1 * p[0] + f2 * p[1]};
      return {p[1], f0 + f1 * p[0]};
    };
    std::vector<Rational> e(3);
    if (!f2.is_zero()) {
      e[0] = st.h1[0] * f2 - st.h1[2] * f0;
      e[1] = st.h1[1] * f2 - st.h1[2] * f1;
      e[2] = st.h1[2];
    } else {
      if (f1.is_zero()) throw internal_error("projected hyperplane degenerated to a non-line");
      e[0] = st.h1[0] * f1 - st.h1[1] * f0;
      e[1] = st.h1[2] * f1;
      e[2] = st.h1[1];
    }

    Instance inst2;
    inst2.A.clear();
    for (const auto& a : st.A) inst2.A.push_back(shear(a));
    ParamCurve lineB = [&]() {
      if (!e[2].is_zero())
        return ParamCurve(UniPoly({Rational(0), Rational(1)}),
                          UniPoly({-e[0] / e[2], -e[1] / e[2]}));
      return ParamCurve(UniPoly({-e[0] / e[1]}), UniPoly({Rational(0), Rational(1)}));
    }();
    inst2.curveB = lineB;
    inst2.T.clear();
    for (const auto& b : st.B) {
      std::array<Rational, 2> q = shear(b);
      inst2.T.push_back(e[2].is_zero() ? q[1] : q[0]);
    }
    inst2.S.clear();
    for (const auto& c : st.C) {
      std::array<Rational, 2> q = shear(c);
      if (!q[1].is_zero()) throw internal_error("sheared C point missed the axis");
      inst2.S.push_back(q[0]);
    }

    PipelineOptions sub = opt;
    sub.seed = opt.seed + 1000 * static_cast<uint64_t>(attempt + 1);
    sub.drop_pair.reset();
    Decision inner = collinear_211_line(inst2, sub);
    led.merge(inner.ledger);

    if (!inner.found) {
      diag["retries"] = retries;
      diag["attempts"] = attempt + 1;
      diag["planar"] = inner.diagnostics;
      dec.found = false;
      dec.diagnostics = diag;
      return dec;
    }
    size_t ia = inner.witness->ia, ib = inner.witness->ib, ic = inner.witness->ic;
    led.record(Phase::search, 2, 3 * static_cast<int>(d));
    if (collinear_ddim(hd.A[ia], hd.B[ib], hd.C[ic])) {
      Witness w;
      w.ia = ia;
      w.ib = ib;
      w.ic = ic;
      w.a_d = hd.A[ia];
      w.b_d = hd.B[ib];
      w.c_d = hd.C[ic];
      diag["retries"] = retries;
      diag["attempts"] = attempt + 1;
      diag["planar"] = inner.diagnostics;
      dec.found = true;
      dec.witness = std::move(w);
      dec.diagnostics = diag;
      return dec;
    }
    ++retries;  // projection artifact: redraw
  }
  throw budget_error("collinear_highdim: re-randomization budget exhausted");
}

// Two simultaneous predicates over three planar sets: the pair (F, G) = 0
// cuts a curve per c, whose reached cells of a 2x2 hierarchy product are
// tested exhaustively. Demonstration-scale by design.
Decision vanish_pair_demo(const Instance& inst, const PipelineOptions& opt) {
  if (!inst.G) throw input_error("vanish_pair_demo: needs a second predicate G");
  const MultiPoly F = inst.F ? *inst.F : collinearity_poly();
  const MultiPoly& G = *inst.G;

  Decision dec;
  SignTestLedger& led = dec.ledger;
  nlohmann::json diag;
  diag["pipeline"] = "pair-demo";

  std::vector<std::array<Rational, 2>> B = inst.B_points(), C = inst.C_points();
  if (inst.A.empty() || B.empty() || C.empty()) {
    diag["resolved_by"] = "empty-input";
    dec.diagnostics = diag;
    return dec;
  }

  size_t n = inst.n();
  size_t cap = std::max<size_t>(1, ceil_sqrt(std::max(inst.A.size(), B.size())));
  size_t r = std::min(std::max<size_t>(opt.g.value_or(std::max<size_t>(2, ceil_sqrt(n))), 1), cap);
  diag["params"] = {{"n", n}, {"r", r}, {"D", opt.D}, {"provider", opt.provider}};

  ProductTree22 tree =
      build_product_22(inst.A, B, r, opt.D, provider_by_name(opt.provider), opt.seed, &led);

  const int fdeg = std::max(F.total_degree(), 1), gdeg = std::max(G.total_degree(), 1);
  uint64_t reached_total = 0, pairs_tested = 0;
  for (size_t kc = 0; kc < C.size(); ++kc) {
    QuerySurface qs;
    qs.defining = {F.eval_partial({{4, C[kc][0]}, {5, C[kc][1]}}),
                   G.eval_partial({{4, C[kc][0]}, {5, C[kc][1]}})};
    auto cells = cells_reached_by_surface(tree, qs, &led, Phase::search, true);
    reached_total += cells.size();
    for (const PairId& pr : cells) {
      for (size_t i : tree.left().node(pr.left).cell.associated)
        for (size_t j : tree.right().node(pr.right).cell.associated) {
          ++pairs_tested;
          std::array<Rational, 6> at{inst.A[i][0], inst.A[i][1], B[j][0],
                                     B[j][1],      C[kc][0],     C[kc][1]};
          led.record(Phase::search, fdeg, 6);
          if (!F.eval(std::span<const Rational>(at.data(), at.size())).is_zero()) continue;
          led.record(Phase::search, gdeg, 6);
          if (!G.eval(std::span<const Rational>(at.data(), at.size())).is_zero()) continue;
          verify_vanish(F, inst.A[i], B[j], C[kc], led);
          verify_vanish(G, inst.A[i], B[j], C[kc], led);
          Witness w;
          w.ia = i;
          w.ib = j;
          w.ic = kc;
          w.a = inst.A[i];
          w.t = inst.T[j];
          w.s = inst.S[kc];
          diag["search"] = {{"reached_cells", reached_total}, {"pairs_tested", pairs_tested}};
          dec.found = true;
          dec.witness = std::move(w);
          dec.diagnostics = diag;
          return dec;
        }
    }
  }
  diag["search"] = {{"reached_cells", reached_total}, {"pairs_tested", pairs_tested}};
  dec.found = false;
  dec.diagnostics = diag;
  return dec;
}

Decision run_pipeline(const std::string& name, const Instance& inst, const PipelineOptions& opt) {
  if (name == "211-line") return collinear_211_line(inst, opt);
  if (name == "211-general") return vanish_211_general(inst, opt);
  if (name == "211-alt") return collinear_211_alt(inst, opt);
  if (name == "highdim") return collinear_highdim(inst, opt);
  if (name == "pair-demo") return vanish_pair_demo(inst, opt);
  if (name == "auto") {
    if (inst.highdim) return collinear_highdim(inst, opt);
    if (inst.G) return vanish_pair_demo(inst, opt);
    if (!inst.F && inst.curveC.is_x_axis()) return collinear_211_line(inst, opt);
    return vanish_211_general(inst, opt);
  }
  throw input_error("unknown pipeline \"" + name + "\"");
}

}  // namespace trivar
