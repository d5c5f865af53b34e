#include "oracle.hpp"

#include <algorithm>
#include <unordered_set>

#include "rng.hpp"

namespace trivar {

int orient(const std::array<Rational, 2>& a, const std::array<Rational, 2>& b,
           const std::array<Rational, 2>& c) {
  Rational det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  return det.sign();
}

bool collinear_ddim(std::span<const Rational> a, std::span<const Rational> b,
                    std::span<const Rational> c) {
  size_t d = a.size();
  if (b.size() != d || c.size() != d) throw internal_error("dimension mismatch in rank test");
  // All 2x2 minors of the 2 x d matrix (b-a; c-a) must vanish.
  for (size_t i = 0; i + 1 < d; ++i)
    for (size_t j = i + 1; j < d; ++j) {
      Rational m = (b[i] - a[i]) * (c[j] - a[j]) - (b[j] - a[j]) * (c[i] - a[i]);
      if (!m.is_zero()) return false;
    }
  return true;
}

std::vector<Triple> brute_collinear(const std::vector<std::array<Rational, 2>>& A,
                                    const std::vector<std::array<Rational, 2>>& B,
                                    const std::vector<std::array<Rational, 2>>& C,
                                    SignTestLedger* ledger) {
  std::vector<Triple> out;
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < B.size(); ++j)
      for (size_t k = 0; k < C.size(); ++k) {
        if (ledger) ledger->record(Phase::oracle, 2, 6);
        if (orient(A[i], B[j], C[k]) == 0) out.push_back({i, j, k});
      }
  return out;
}

std::vector<Triple> brute_vanish(const MultiPoly& F, const MultiPoly* G,
                                 const std::vector<std::array<Rational, 2>>& A,
                                 const std::vector<std::array<Rational, 2>>& B,
                                 const std::vector<std::array<Rational, 2>>& C,
                                 SignTestLedger* ledger) {
  if (F.vars().size() != 6 || (G && G->vars().size() != 6))
    throw input_error("brute_vanish needs six-variate predicates");
  std::vector<Triple> out;
  std::vector<Rational> pt(6);
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < B.size(); ++j)
      for (size_t k = 0; k < C.size(); ++k) {
        pt[0] = A[i][0];
        pt[1] = A[i][1];
        pt[2] = B[j][0];
        pt[3] = B[j][1];
        pt[4] = C[k][0];
        pt[5] = C[k][1];
        if (ledger) ledger->record(Phase::oracle, F.total_degree(), 6);
        if (!F.eval(pt).is_zero()) continue;
        if (G) {
          if (ledger) ledger->record(Phase::oracle, G->total_degree(), 6);
          if (!G->eval(pt).is_zero()) continue;
        }
        out.push_back({i, j, k});
      }
  return out;
}

std::vector<Triple> brute_collinear_ddim(const std::vector<std::vector<Rational>>& A,
                                         const std::vector<std::vector<Rational>>& B,
                                         const std::vector<std::vector<Rational>>& C,
                                         SignTestLedger* ledger) {
  std::vector<Triple> out;
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < B.size(); ++j)
      for (size_t k = 0; k < C.size(); ++k) {
        if (ledger) ledger->record(Phase::oracle, 2, 9);
        if (collinear_ddim(A[i], B[j], C[k])) out.push_back({i, j, k});
      }
  return out;
}

bool oracle_has_triple(const Instance& inst, SignTestLedger* ledger) {
  if (inst.highdim)
    return !brute_collinear_ddim(inst.highdim->A, inst.highdim->B, inst.highdim->C, ledger).empty();
  auto B = inst.B_points();
  auto C = inst.C_points();
  if (inst.F && inst.G) return !brute_vanish(*inst.F, &*inst.G, inst.A, B, C, ledger).empty();
  if (inst.F) return !brute_vanish(*inst.F, nullptr, inst.A, B, C, ledger).empty();
  return !brute_collinear(inst.A, B, C, ledger).empty();
}

ParamCurve named_curve(const std::string& name) {
  UniPoly t = UniPoly::x();
  UniPoly one = UniPoly::constant(Rational(1));
  if (name == "parabola") return ParamCurve(t, t * t);
  if (name == "x-axis") return ParamCurve::x_axis();
  if (name == "line") return ParamCurve(t, UniPoly({Rational(1), Rational(2)}));  // y = 2t+1
  if (name == "hline") return ParamCurve(t, one);                                 // y = 1
  if (name == "cubic") return ParamCurve(t, t * t * t);
  if (name == "circle") {
    // (1-t^2, 2t) / (1+t^2): the rational unit circle, no real poles.
    UniPoly den({Rational(1), Rational(0), Rational(1)});
    return ParamCurve(UniPoly({Rational(1), Rational(0), Rational(-1)}), den,
                      UniPoly({Rational(0), Rational(2)}), den);
  }
  if (name == "hyperbola") return ParamCurve(t, one, one, t);  // (t, 1/t), pole at 0
  throw input_error("unknown curve \"" + name + "\"");
}

namespace {

Rational draw_rational(SplitMix64& rng, long long mag, long long den_max) {
  long num = static_cast<long>(rng.uniform(-mag, mag));
  long den = den_max > 1 ? static_cast<long>(rng.uniform(1, den_max)) : 1;
  return Rational(mpz_class(num), mpz_class(den));
}

// n distinct curve parameters avoiding poles.
std::vector<Rational> draw_params(SplitMix64& rng, size_t n, const ParamCurve& curve,
                                  long long mag, long long den_max) {
  std::vector<Rational> out;
  std::unordered_set<uint64_t> seen;
  out.reserve(n);
  while (out.size() < n) {
    Rational v = draw_rational(rng, mag, den_max);
    if (curve.is_pole(v)) continue;
    if (!seen.insert(v.hash()).second) continue;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::array<Rational, 2>> draw_points(SplitMix64& rng, size_t n, long long mag,
                                                 long long den_max) {
  std::vector<std::array<Rational, 2>> out;
  std::unordered_set<uint64_t> seen;
  out.reserve(n);
  while (out.size() < n) {
    Rational x = draw_rational(rng, mag, den_max);
    Rational y = draw_rational(rng, mag, den_max);
    if (!seen.insert(hash_mix(x.hash(), y.hash())).second) continue;
    out.push_back({std::move(x), std::move(y)});
  }
  return out;
}

bool point_present(const std::vector<std::array<Rational, 2>>& pts,
                   const std::array<Rational, 2>& q) {
  return std::any_of(pts.begin(), pts.end(),
                     [&](const auto& p) { return p[0] == q[0] && p[1] == q[1]; });
}

// Replace A[slot] with a point on the segment through b(t*) and c(s*).
void plant_collinear(Instance& inst, SplitMix64& rng) {
  if (inst.A.empty() || inst.T.empty() || inst.S.empty())
    throw input_error("cannot plant a witness in an empty instance");
  size_t slot = static_cast<size_t>(rng.uniform(0, static_cast<int64_t>(inst.A.size()) - 1));
  for (int attempt = 0; attempt < 4096; ++attempt) {
    const Rational& t = inst.T[static_cast<size_t>(rng.uniform(0, static_cast<int64_t>(inst.T.size()) - 1))];
    const Rational& s = inst.S[static_cast<size_t>(rng.uniform(0, static_cast<int64_t>(inst.S.size()) - 1))];
    auto b = inst.curveB.eval(t);
    auto c = inst.curveC.eval(s);
    if (b[0] == c[0] && b[1] == c[1]) continue;
    Rational lam(mpz_class(rng.uniform(2, 9)), mpz_class(rng.uniform(11, 17)));
    std::array<Rational, 2> a{b[0] + lam * (c[0] - b[0]), b[1] + lam * (c[1] - b[1])};
    if (a[1].is_zero()) continue;  // stays off the x-axis so reductions keep it
    if (point_present(inst.A, a)) continue;
    std::array<Rational, 2> old = inst.A[slot];
    inst.A[slot] = a;
    if (point_present(inst.B_points(), a) || point_present(inst.C_points(), a)) {
      inst.A[slot] = old;
      continue;
    }
    if (orient(inst.A[slot], b, c) != 0) throw internal_error("planted witness fails the exact check");
    return;
  }
  throw internal_error("could not plant a collinear witness");
}

MultiPoly unit_area_poly() {
  return collinearity_poly() - MultiPoly::constant(fvars(), Rational(2));
}

// Plant a zero of F by solving for one coordinate of a (needs F affine in
// x1 or x2 after fixing the rest; the stock predicates are).
void plant_vanishing(Instance& inst, const MultiPoly& F, SplitMix64& rng) {
  size_t slot = static_cast<size_t>(rng.uniform(0, static_cast<int64_t>(inst.A.size()) - 1));
  for (int attempt = 0; attempt < 4096; ++attempt) {
    const Rational& t = inst.T[static_cast<size_t>(rng.uniform(0, static_cast<int64_t>(inst.T.size()) - 1))];
    const Rational& s = inst.S[static_cast<size_t>(rng.uniform(0, static_cast<int64_t>(inst.S.size()) - 1))];
    auto b = inst.curveB.eval(t);
    auto c = inst.curveC.eval(s);
    Rational free = draw_rational(rng, 64, 7);
    for (size_t solve_var : {size_t{1}, size_t{0}}) {
      size_t fixed_var = 1 - solve_var;
      MultiPoly g = F.eval_partial({{fixed_var, free},
                                    {size_t{2}, b[0]},
                                    {size_t{3}, b[1]},
                                    {size_t{4}, c[0]},
                                    {size_t{5}, c[1]}});
      UniPoly u = g.to_unipoly(solve_var);
      if (u.degree() != 1) continue;
      Rational root = -u.coef(0) / u.coef(1);
      std::array<Rational, 2> a;
      a[fixed_var] = free;
      a[solve_var] = root;
      if (point_present(inst.A, a)) continue;
      inst.A[slot] = a;
      std::vector<Rational> pt{a[0], a[1], b[0], b[1], c[0], c[1]};
      if (!F.eval(pt).is_zero()) throw internal_error("planted zero fails the exact check");
      return;
    }
  }
  throw input_error("family/curve incompatibility: predicate not affine in either a-coordinate");
}

Instance generate_highdim(const InstanceSpec& spec) {
  if (spec.d < 3) throw input_error("highdim-flats needs d >= 3");
  size_t d = static_cast<size_t>(spec.d);
  SplitMix64 root(spec.seed);
  Instance inst;
  HighDimInstance hd;
  hd.d = spec.d;

  // h1: x_d = 0. h2: x_d = 1 when parallel, else x_1 = 0.
  hd.h1.assign(d + 1, Rational(0));
  hd.h1[d] = Rational(1);
  hd.h2.assign(d + 1, Rational(0));
  if (spec.parallel_flats) {
    hd.h2[d] = Rational(1);
    hd.h2[0] = Rational(-1);
  } else {
    hd.h2[1] = Rational(1);
  }

  auto gen_points = [&](SplitMix64 rng, size_t count, int plane) {
    // plane 0: none (A), 1: on h1, 2: on h2.
    std::vector<std::vector<Rational>> pts;
    std::unordered_set<uint64_t> seen;
    while (pts.size() < count) {
      std::vector<Rational> p(d);
      for (size_t i = 0; i < d; ++i) p[i] = draw_rational(rng, spec.mag, 1);
      if (plane == 1) p[d - 1] = Rational(0);
      if (plane == 2) {
        if (spec.parallel_flats)
          p[d - 1] = Rational(1);
        else
          p[0] = Rational(0);
      }
      if (plane == 0) {
        // A avoids both hyperplanes.
        if (p[d - 1].is_zero()) continue;
        if (spec.parallel_flats ? (p[d - 1] == Rational(1)) : p[0].is_zero()) continue;
      }
      if (plane == 1 && !spec.parallel_flats && p[0].is_zero()) continue;   // keep B off h1 cap h2
      if (plane == 2 && !spec.parallel_flats && p[d - 1].is_zero()) continue;
      uint64_t h = 0;
      for (const auto& c : p) h = hash_mix(h, c.hash());
      if (!seen.insert(h).second) continue;
      pts.push_back(std::move(p));
    }
    return pts;
  };
  hd.A = gen_points(root.derive(1), spec.n, 0);
  hd.B = gen_points(root.derive(2), spec.n, 1);
  hd.C = gen_points(root.derive(3), spec.n, 2);

  if (spec.plant) {
    SplitMix64 rng = root.derive(4);
    size_t slot = static_cast<size_t>(rng.uniform(0, static_cast<int64_t>(spec.n) - 1));
    for (int attempt = 0; attempt < 4096; ++attempt) {
      const auto& b = hd.B[static_cast<size_t>(rng.uniform(0, static_cast<int64_t>(spec.n) - 1))];
      const auto& c = hd.C[static_cast<size_t>(rng.uniform(0, static_cast<int64_t>(spec.n) - 1))];
      long p = static_cast<long>(rng.uniform(2, 9)), q = static_cast<long>(rng.uniform(11, 17));
      Rational lam{mpz_class(p), mpz_class(q)};
      std::vector<Rational> a(d);
      for (size_t i = 0; i < d; ++i) a[i] = b[i] + lam * (c[i] - b[i]);
      if (a[d - 1].is_zero()) continue;
      if (spec.parallel_flats ? (a[d - 1] == Rational(1)) : a[0].is_zero()) continue;
      hd.A[slot] = a;
      if (!collinear_ddim(hd.A[slot], b, c)) throw internal_error("planted witness fails the exact check");
      break;
    }
  }
  inst.highdim = std::move(hd);
  inst.mark_tainted();
  return inst;
}

}  // namespace

Instance generate(const InstanceSpec& spec) {
  if (spec.n == 0) throw input_error("n must be positive");
  if (spec.family == "highdim-flats") return generate_highdim(spec);

  SplitMix64 root(spec.seed);
  Instance inst;
  inst.curveB = named_curve(spec.curve_b);
  inst.curveC = named_curve(spec.curve_c);

  bool on_curves = spec.family == "on-curves";
  long long den_max = on_curves ? 16 : 1;

  if (spec.family == "grid") {
    size_t m = 1;
    while (m * m < spec.n) ++m;
    long half = static_cast<long>(m) / 2;
    for (size_t idx = 0; idx < spec.n; ++idx) {
      long i = static_cast<long>(idx % m) - half;
      long j = static_cast<long>(idx / m) - half;
      inst.A.push_back({Rational(mpz_class(i)), Rational(mpz_class(j))});
    }
    for (size_t i = 1; i <= spec.n; ++i) {  // positive integers avoid the hyperbola pole
      inst.T.push_back(Rational(mpz_class(static_cast<long>(i))));
      inst.S.push_back(Rational(mpz_class(static_cast<long>(i))));
    }
  } else if (spec.family == "uniform-random" || spec.family == "planted-collinear" ||
             spec.family == "planted-sparse" || spec.family == "planted-vanishing" ||
             spec.family == "near-degenerate" || on_curves) {
    SplitMix64 ra = root.derive(1), rt = root.derive(2), rs = root.derive(3);
    inst.A = draw_points(ra, spec.n, spec.mag, den_max);
    inst.T = draw_params(rt, spec.n, inst.curveB, spec.mag, den_max);
    inst.S = draw_params(rs, spec.n, inst.curveC, spec.mag, den_max);
  } else {
    throw input_error("unknown family \"" + spec.family + "\"");
  }

  SplitMix64 rp = root.derive(4);
  if (spec.family == "planted-collinear" || spec.family == "planted-sparse") {
    plant_collinear(inst, rp);
  } else if (spec.family == "near-degenerate") {
    plant_collinear(inst, rp);
    // Knock the witness off by 2^-k; exact arithmetic must still say "no".
    size_t slot = 0;
    bool found = false;
    auto B = inst.B_points();
    auto C = inst.C_points();
    for (size_t i = 0; i < inst.A.size() && !found; ++i)
      for (size_t j = 0; j < B.size() && !found; ++j)
        for (size_t k = 0; k < C.size() && !found; ++k)
          if (orient(inst.A[i], B[j], C[k]) == 0) {
            slot = i;
            found = true;
          }
    if (found) {
      mpz_class den = 1;
      mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(spec.perturb_k));
      inst.A[slot][0] += Rational(mpz_class(1), den);
    }
  } else if (spec.family == "planted-vanishing") {
    if (spec.predicate == "collinear") {
      inst.F = collinearity_poly();
      plant_vanishing(inst, *inst.F, rp);
    } else if (spec.predicate == "unit-area") {
      inst.F = unit_area_poly();
      plant_vanishing(inst, *inst.F, rp);
    } else if (spec.predicate == "pair") {
      inst.F = collinearity_poly();
      plant_collinear(inst, rp);
      // Second predicate: a line through the planted point, so the pair
      // has a common zero there.
      auto B = inst.B_points();
      auto C = inst.C_points();
      for (size_t i = 0; i < inst.A.size(); ++i)
        for (size_t j = 0; j < B.size(); ++j)
          for (size_t k = 0; k < C.size(); ++k)
            if (orient(inst.A[i], B[j], C[k]) == 0) {
              auto v = [](const char* n) { return MultiPoly::var(fvars(), n); };
              inst.G = v("x1") + v("x2") -
                       MultiPoly::constant(fvars(), inst.A[i][0] + inst.A[i][1]);
              inst.mark_tainted();
              return inst;
            }
      throw internal_error("pair plant lost its collinear witness");
    } else {
      throw input_error("unknown predicate \"" + spec.predicate + "\"");
    }
  }

  inst.mark_tainted();
  return inst;
}

}  // namespace trivar
