#include "goodfibers.hpp"

#include <map>

#include "realroot.hpp"

namespace trivar {

namespace {

// x1=0, x2=1, t=2, s=3 after embedding.
MultiPoly normalize_h(const MultiPoly& H) {
  const auto canon = hvars();
  for (const auto& v : H.vars())
    if (std::find(canon.begin(), canon.end(), v) == canon.end())
      throw input_error("H must use variables x1, x2, t, s; got " + v);
  return H.embedded(canon);
}

// Coefficient polynomials of H grouped by (x1, x2, t) monomials, as
// univariate polynomials in s.
std::vector<UniPoly> s_groups(const MultiPoly& H) {
  std::map<std::array<unsigned, 3>, std::vector<Rational>> groups;
  for (const auto& term : H.terms()) {
    std::array<unsigned, 3> key{term.exps[0], term.exps[1], term.exps[2]};
    auto& dense = groups[key];
    if (dense.size() <= term.exps[3]) dense.resize(term.exps[3] + 1);
    dense[term.exps[3]] = dense[term.exps[3]] + term.coef;
  }
  std::vector<UniPoly> out;
  out.reserve(groups.size());
  for (auto& [key, dense] : groups) out.emplace_back(std::move(dense));
  return out;
}

std::vector<MultiPoly> nonzero(std::vector<MultiPoly> polys) {
  std::erase_if(polys, [](const MultiPoly& p) { return p.is_zero(); });
  return polys;
}

}  // namespace

DegeneracyLocus degeneracy_locus(const MultiPoly& H) {
  MultiPoly h = normalize_h(H);
  DegeneracyLocus locus;
  locus.generators = nonzero(h.coefficients_in(3));
  return locus;
}

UniPoly h_star(const MultiPoly& H) {
  UniPoly acc;
  for (const auto& h : s_groups(normalize_h(H))) acc = acc + h * h;
  return acc;
}

MultiPoly g_of_condition1(const MultiPoly& H) {
  MultiPoly h = normalize_h(H);
  MultiPoly acc(hvars());
  for (const auto& g : nonzero(h.coefficients_in(2))) acc = acc + g * g;
  return acc;
}

namespace {

struct Reducer {
  const std::vector<Point2>& A;
  const std::vector<Rational>& T;
  const std::vector<Rational>& S;
  SignTestLedger* ledger;
  MultiPoly H_orig;  // verification target for every witness

  std::vector<size_t> t_order, s_order;  // lazily sorted index orders

  void charge(int degree, int arity = 1, uint64_t times = 1) const {
    if (ledger) ledger->record(Phase::degeneracy, std::max(degree, 1), arity, times);
  }

  const std::vector<size_t>& sorted(const std::vector<Rational>& vals, std::vector<size_t>& order) {
    if (order.size() != vals.size()) {
      order.resize(vals.size());
      for (size_t i = 0; i < vals.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        charge(1);
        return vals[x] < vals[y];
      });
    }
    return order;
  }

  // Counted binary search for an exact hit of an algebraic root in a sorted
  // rational list.
  std::optional<size_t> find_root(const RealAlgebraic& root, const std::vector<Rational>& vals,
                                  const std::vector<size_t>& order, int degree) {
    size_t lo = 0, hi = order.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      charge(degree);
      int c = RealAlgebraic::cmp(root, vals[order[mid]]);
      if (c == 0) return order[mid];
      if (c < 0) hi = mid;
      else lo = mid + 1;
    }
    return std::nullopt;
  }

  Decision found(size_t ia, size_t it, size_t is, const std::string& branch) {
    Witness w;
    w.ia = ia;
    w.ib = it;
    w.ic = is;
    w.a = A[ia];
    w.t = T[it];
    w.s = S[is];
    std::array<Rational, 4> pt{w.a[0], w.a[1], w.t, w.s};
    charge(H_orig.total_degree(), 4);
    if (!H_orig.eval(std::span<const Rational>(pt)).is_zero())
      throw internal_error("good-fibers witness failed exact re-verification");
    Decision d;
    d.found = true;
    d.witness = std::move(w);
    d.diagnostics["branch"] = branch;
    return d;
  }

  // A zero polynomial is decided by charged coefficient comparisons, one per
  // coefficient examined until the first nonzero.
  bool certainly_zero(const UniPoly& p, int charge_degree) {
    if (p.is_zero()) {
      charge(charge_degree);
      return true;
    }
    for (const auto& c : p.coefs()) {
      charge(charge_degree);
      if (!c.is_zero()) return false;
    }
    return true;
  }

  // H missing at least one of x, t, s: sorted-intersection searches settle
  // the verdict outright.
  Decision resolve_independent(const MultiPoly& H, bool dx, bool dt, bool ds,
                               const std::string& branch) {
    int deg = std::max(H.total_degree(), 1);
    if (!dx && !dt && !ds) {
      Decision d;  // nonzero constant never vanishes
      d.diagnostics["branch"] = branch;
      return d;
    }
    if (dx && !dt && !ds) {
      for (size_t ia = 0; ia < A.size(); ++ia) {
        std::array<Rational, 4> pt{A[ia][0], A[ia][1], Rational(0), Rational(0)};
        charge(deg, 2);
        if (H.eval(std::span<const Rational>(pt)).is_zero()) return found(ia, 0, 0, branch);
      }
      Decision d;
      d.diagnostics["branch"] = branch;
      return d;
    }
    // Root sets of the surviving univariate slices, intersected with the
    // matching parameter list.
    auto search_roots = [&](const UniPoly& p, bool against_s,
                            size_t ia, size_t it) -> std::optional<Decision> {
      const auto& vals = against_s ? S : T;
      const auto& order = sorted(vals, against_s ? s_order : t_order);
      for (const auto& root : real_roots_distinct(p)) {
        auto hit = find_root(root, vals, order, std::max(p.degree(), 1));
        if (!hit) continue;
        if (against_s) return found(ia, it, *hit, branch);
        return found(ia, *hit, 0, branch);
      }
      return std::nullopt;
    };

    if (!dx && dt != ds) {  // only t, or only s
      size_t var = dt ? 2u : 3u;
      UniPoly p = H.to_unipoly(var);
      if (auto d = search_roots(p, ds, 0, 0)) return *d;
      Decision d;
      d.diagnostics["branch"] = branch;
      return d;
    }
    if (dx) {  // x with exactly one of t, s
      size_t var = dt ? 2u : 3u;
      for (size_t ia = 0; ia < A.size(); ++ia) {
        MultiPoly slice = H.eval_partial({{0, A[ia][0]}, {1, A[ia][1]}});
        UniPoly p = slice.to_unipoly(var);
        if (certainly_zero(p, deg)) return found(ia, 0, 0, branch);
        if (auto d = search_roots(p, ds, ia, 0)) return *d;
      }
      Decision d;
      d.diagnostics["branch"] = branch;
      return d;
    }
    // t and s only: slice per t in T, search roots in S.
    for (size_t it = 0; it < T.size(); ++it) {
      UniPoly p = H.eval_partial({{2, T[it]}}).to_unipoly(3);
      if (certainly_zero(p, deg)) return found(0, it, 0, branch);
      if (auto d = search_roots(p, true, 0, it)) return *d;
    }
    Decision d;
    d.diagnostics["branch"] = branch;
    return d;
  }
};

}  // namespace

GoodFibersResult good_fibers_reduce_h(const MultiPoly& H_in, const std::vector<Point2>& A,
                                      const std::vector<Rational>& T,
                                      const std::vector<Rational>& S, SignTestLedger* ledger) {
  GoodFibersResult res;
  res.H = normalize_h(H_in);
  Reducer rd{A, T, S, ledger, res.H, {}, {}};
  nlohmann::json removed = nlohmann::json::array();

  auto resolve = [&](Decision d) {
    d.diagnostics["reduction_branches"] = res.branches;
    res.resolved = true;
    res.decision = std::move(d);
  };

  for (int round = 0; round < 16; ++round) {
    MultiPoly& H = res.H;
    if (H.is_zero()) {
      res.branches.push_back("zero");
      if (A.empty() || T.empty() || S.empty()) {
        resolve(Decision::not_found());
      } else {
        resolve(rd.found(0, 0, 0, "zero"));
      }
      return res;
    }
    if (A.empty() || T.empty() || S.empty()) {
      res.branches.push_back("empty_input");
      resolve(Decision::not_found());
      return res;
    }

    bool dx = H.depends_on(0) || H.depends_on(1);
    bool dt = H.depends_on(2);
    bool ds = H.depends_on(3);
    if (!(dx && dt && ds)) {
      res.branches.push_back("independence");
      resolve(rd.resolve_independent(H, dx, dt, ds, "independence"));
      return res;
    }

    // Common factor in s alone: exactly the real zero locus of H*.
    {
      std::vector<UniPoly> groups = s_groups(H);
      UniPoly cont = groups[0];
      for (size_t i = 1; i < groups.size() && cont.degree() > 0; ++i)
        cont = UniPoly::gcd(cont, groups[i]);
      if (cont.degree() >= 1) {
        res.branches.push_back("s_content");
        removed.push_back({{"branch", "s_content"}, {"degree", cont.degree()}});
        res.notes["hstar_flag"] = "common s-factor violates irreducibility or non-degeneracy";
        res.notes["exceptional_s_count"] = real_roots_distinct(cont).size();
        for (size_t is = 0; is < S.size(); ++is) {
          rd.charge(cont.degree());
          if (cont.sign_at(S[is]) == 0) {
            resolve(rd.found(0, 0, is, "s_content"));
            return res;
          }
        }
        auto q = MultiPoly::div_exact(H, MultiPoly::from_unipoly(cont, hvars(), 3));
        if (!q) throw internal_error("s-content division failed");
        H = std::move(*q);
        continue;
      }
    }

    // Common factor h(t, s) of the x-coefficients (Bezout alternative to a
    // discrete degenerate set).
    {
      std::vector<MultiPoly> hij;
      for (const auto& c0 : H.coefficients_in(0))
        for (auto& c1 : c0.coefficients_in(1))
          if (!c1.is_zero()) hij.push_back(std::move(c1));
      MultiPoly g = hij[0];
      for (size_t i = 1; i < hij.size() && !g.is_constant(); ++i) g = MultiPoly::gcd(g, hij[i]);
      if (!g.is_constant()) {
        res.branches.push_back("x_content");
        removed.push_back({{"branch", "x_content"}, {"degree", g.total_degree()}});
        int deg = std::max(g.total_degree(), 1);
        for (size_t it = 0; it < T.size(); ++it) {
          UniPoly gt = g.eval_partial({{2, T[it]}}).to_unipoly(3);
          if (rd.certainly_zero(gt, deg)) {
            resolve(rd.found(0, it, 0, "x_content"));
            return res;
          }
          const auto& order = rd.sorted(S, rd.s_order);
          for (const auto& root : real_roots_distinct(gt)) {
            if (auto hit = rd.find_root(root, S, order, deg)) {
              resolve(rd.found(0, it, *hit, "x_content"));
              return res;
            }
          }
        }
        auto q = MultiPoly::div_exact(H, g);
        if (!q) throw internal_error("x-content division failed");
        H = std::move(*q);
        continue;
      }
    }

    // Lines of Z(H) parallel to the t-axis: common factor of the
    // t-coefficients first, then the residual discrete exceptional set.
    {
      std::vector<MultiPoly> gi = nonzero(H.coefficients_in(2));
      MultiPoly c = gi[0];
      for (size_t i = 1; i < gi.size() && !c.is_constant(); ++i) c = MultiPoly::gcd(c, gi[i]);
      if (!c.is_constant()) {
        res.branches.push_back("t_content");
        removed.push_back({{"branch", "t_content"}, {"degree", c.total_degree()}});
        int deg = std::max(c.total_degree(), 1);
        for (size_t ia = 0; ia < A.size(); ++ia) {
          UniPoly ca = c.eval_partial({{0, A[ia][0]}, {1, A[ia][1]}}).to_unipoly(3);
          if (rd.certainly_zero(ca, deg)) {
            resolve(rd.found(ia, 0, 0, "t_content"));
            return res;
          }
          const auto& order = rd.sorted(S, rd.s_order);
          for (const auto& root : real_roots_distinct(ca)) {
            if (auto hit = rd.find_root(root, S, order, deg)) {
              resolve(rd.found(ia, 0, *hit, "t_content"));
              return res;
            }
          }
        }
        auto q = MultiPoly::div_exact(H, c);
        if (!q) throw internal_error("t-content division failed");
        H = std::move(*q);
        continue;
      }

      res.branches.push_back("t_lines");
      MultiPoly G = g_of_condition1(H);
      int deg = std::max(G.total_degree(), 1);
      size_t exceptional_pairs = 0;
      for (size_t ia = 0; ia < A.size(); ++ia) {
        UniPoly Ga = G.eval_partial({{0, A[ia][0]}, {1, A[ia][1]}}).to_unipoly(3);
        if (rd.certainly_zero(Ga, deg)) {
          resolve(rd.found(ia, 0, 0, "t_lines"));
          return res;
        }
        const auto& order = rd.sorted(S, rd.s_order);
        for (const auto& root : real_roots_distinct(Ga)) {
          ++exceptional_pairs;
          if (auto hit = rd.find_root(root, S, order, deg)) {
            resolve(rd.found(ia, 0, *hit, "t_lines"));
            return res;
          }
        }
      }
      res.notes["exceptional_pairs_checked"] = exceptional_pairs;
    }

    res.good_fibers_certified = true;
    res.irreducibility_warning = res.H.total_degree() > 1;
    res.notes["removed_factors"] = removed;
    return res;
  }
  throw internal_error("good-fibers reduction did not stabilize");
}

GoodFibersResult good_fibers_reduce(const MultiPoly& F, const ParamCurve& gB, const ParamCurve& gC,
                                    const std::vector<Point2>& A, const std::vector<Rational>& T,
                                    const std::vector<Rational>& S, SignTestLedger* ledger) {
  SubstitutionResult sub = substitute_curves(F, gB, gC);
  return good_fibers_reduce_h(sub.H, A, T, S, ledger);
}

}  // namespace trivar
