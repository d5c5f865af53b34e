#include "realroot.hpp"

#include <algorithm>

namespace trivar {

SturmChain::SturmChain(const UniPoly& squarefree) {
  if (squarefree.is_zero()) throw domain_error("Sturm chain of zero polynomial");
  chain_.push_back(squarefree);
  if (squarefree.degree() == 0) return;
  chain_.push_back(squarefree.derivative());
  while (chain_.back().degree() > 0) {
    UniPoly r = UniPoly::divmod(chain_[chain_.size() - 2], chain_.back()).second;
    if (r.is_zero()) break;  // input not squarefree; chain still counts distinct roots
    chain_.push_back(-r);
  }
}

int SturmChain::variations_at(const Rational& t) const {
  int var = 0, prev = 0;
  for (const auto& p : chain_) {
    int s = p.sign_at(t);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++var;
    prev = s;
  }
  return var;
}

int SturmChain::count(const Rational& a, const Rational& b) const {
  return variations_at(a) - variations_at(b);
}

RealAlgebraic RealAlgebraic::from_rational(Rational q) {
  RealAlgebraic r;
  r.def_ = UniPoly({-q, Rational(1)});
  r.lo_ = q;
  r.hi_ = q;
  r.rational_ = std::move(q);
  return r;
}

RealAlgebraic RealAlgebraic::from_isolated(UniPoly def, Rational lo, Rational hi) {
  if (def.sign_at(lo) == 0 || def.sign_at(hi) == 0)
    throw internal_error("isolating interval endpoints must not be roots");
  if (!(lo < hi)) throw internal_error("empty isolating interval");
  RealAlgebraic r;
  r.def_ = std::move(def);
  r.lo_ = std::move(lo);
  r.hi_ = std::move(hi);
  return r;
}

const Rational& RealAlgebraic::rational_value() const {
  if (!rational_) throw domain_error("not a rational value");
  return *rational_;
}

void RealAlgebraic::refine() {
  if (rational_) return;
  Rational m = Rational::mid(lo_, hi_);
  int sm = def_.sign_at(m);
  if (sm == 0) {
    rational_ = m;
    lo_ = m;
    hi_ = m;
    return;
  }
  if (def_.sign_at(lo_) * sm < 0) {
    hi_ = std::move(m);
  } else {
    lo_ = std::move(m);
  }
}

void RealAlgebraic::refine_below(const Rational& width) {
  while (!rational_ && hi_ - lo_ >= width) refine();
}

int RealAlgebraic::cmp(const RealAlgebraic& a, const Rational& q) {
  if (a.rational_) return Rational::cmp(*a.rational_, q);
  if (q <= a.lo_) return 1;
  if (q >= a.hi_) return -1;
  int sq = a.def_.sign_at(q);
  if (sq == 0) return 0;  // q is the unique root in the interval
  return a.def_.sign_at(a.lo_) * sq < 0 ? -1 : 1;
}

int RealAlgebraic::cmp(const RealAlgebraic& a, const RealAlgebraic& b) {
  if (a.rational_) return -cmp(b, *a.rational_);
  if (b.rational_) return cmp(a, *b.rational_);

  // Common-root test: g's roots inside either isolating interval are exactly
  // the shared roots, and each interval holds at most one.
  UniPoly g = UniPoly::gcd(a.def_, b.def_);
  bool maybe_equal = g.degree() > 0;
  std::optional<SturmChain> gs;
  if (maybe_equal) {
    bool a_in = g.sign_at(a.lo_) * g.sign_at(a.hi_) < 0;
    bool b_in = g.sign_at(b.lo_) * g.sign_at(b.hi_) < 0;
    maybe_equal = a_in && b_in;
    if (maybe_equal) gs.emplace(g);
  }

  RealAlgebraic x = a, y = b;
  while (true) {
    if (x.rational_) return -cmp(y, *x.rational_);
    if (y.rational_) return cmp(x, *y.rational_);
    if (x.hi_ <= y.lo_) return -1;
    if (y.hi_ <= x.lo_) return 1;
    if (maybe_equal) {
      Rational lo = std::min(x.lo_, y.lo_);
      Rational hi = std::max(x.hi_, y.hi_);
      if (gs->count(lo, hi) == 1) return 0;
    }
    x.refine();
    y.refine();
  }
}

std::string RealAlgebraic::to_string() const {
  if (rational_) return rational_->to_string();
  return "root(" + def_.to_string() + ") in (" + lo_.to_string() + ", " + hi_.to_string() + ")";
}

uint64_t RealAlgebraic::hash_interval_free() const { return def_.hash(); }

std::vector<RealAlgebraic> real_roots_distinct(const UniPoly& p) {
  if (p.is_zero()) throw domain_error("real_roots: polynomial identically zero");
  std::vector<RealAlgebraic> out;
  if (p.degree() == 0) return out;
  UniPoly f = p.squarefree_part();
  if (f.degree() == 0) return out;

  SturmChain sturm(f);
  Rational bound = f.root_bound();
  Rational lo = -bound, hi = bound;

  struct Span {
    Rational lo, hi;
    int count;
  };
  std::vector<Span> work;
  int total = sturm.count(lo, hi);
  if (total > 0) work.push_back({lo, hi, total});

  while (!work.empty()) {
    Span s = std::move(work.back());
    work.pop_back();
    if (s.count == 1) {
      out.push_back(RealAlgebraic::from_isolated(f, s.lo, s.hi));
      continue;
    }
    Rational m = Rational::mid(s.lo, s.hi);
    if (f.sign_at(m) == 0) {
      // Rational root at the midpoint; carve out a clean neighborhood.
      out.push_back(RealAlgebraic::from_rational(m));
      Rational delta = (s.hi - s.lo) / Rational(4);
      while (true) {
        Rational l = m - delta, r = m + delta;
        if (f.sign_at(l) != 0 && f.sign_at(r) != 0 && sturm.count(l, r) == 1) {
          int cl = sturm.count(s.lo, l);
          int cr = sturm.count(r, s.hi);
          if (cl > 0) work.push_back({s.lo, l, cl});
          if (cr > 0) work.push_back({r, s.hi, cr});
          break;
        }
        delta = delta / Rational(2);
      }
      continue;
    }
    int cl = sturm.count(s.lo, m);
    int cr = s.count - cl;
    if (cl > 0) work.push_back({s.lo, m, cl});
    if (cr > 0) work.push_back({m, s.hi, cr});
  }

  std::sort(out.begin(), out.end(),
            [](const RealAlgebraic& a, const RealAlgebraic& b) { return RealAlgebraic::cmp(a, b) < 0; });
  return out;
}

std::vector<RootWithMultiplicity> real_roots(const UniPoly& p) {
  if (p.is_zero()) throw domain_error("real_roots: polynomial identically zero");
  std::vector<RootWithMultiplicity> out;
  if (p.degree() == 0) return out;
  auto factors = p.squarefree_decomposition();
  for (size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].degree() <= 0) continue;
    for (auto& r : real_roots_distinct(factors[i]))
      out.push_back({std::move(r), static_cast<int>(i) + 1});
  }
  std::sort(out.begin(), out.end(), [](const RootWithMultiplicity& a, const RootWithMultiplicity& b) {
    return RealAlgebraic::cmp(a.root, b.root) < 0;
  });
  return out;
}

int sign_at(const UniPoly& p, const RealAlgebraic& x) {
  if (x.is_rational()) return p.sign_at(x.rational_value());
  if (p.is_zero()) return 0;
  UniPoly r = p.degree() >= x.defining().degree() ? UniPoly::divmod(p, x.defining()).second : p;
  if (r.is_zero()) return 0;
  if (r.degree() == 0) return r.lead().sign();
  UniPoly g = UniPoly::gcd(r, x.defining());
  if (g.degree() > 0 && g.sign_at(x.lo()) * g.sign_at(x.hi()) < 0) return 0;
  // r(x) != 0: refine until the interval enclosure of r excludes zero.
  RealAlgebraic y = x;
  while (true) {
    RatInterval v = r.eval(RatInterval(y.lo(), y.hi()));
    int s = v.determined_sign();
    if (s != 0) return s;
    y.refine();
    if (y.is_rational()) return r.sign_at(y.rational_value());
  }
}

int eval_sign(const MultiPoly& p, const AlgebraicPoint& pt) {
  if (pt.coords.size() != p.vars().size()) throw internal_error("eval_sign arity mismatch");
  int alg_at = -1;
  for (size_t i = 0; i < pt.coords.size(); ++i) {
    if (!pt.coords[i].is_rational()) {
      if (alg_at >= 0) throw domain_error("eval_sign supports at most one algebraic coordinate");
      alg_at = static_cast<int>(i);
    }
  }
  if (alg_at < 0) {
    std::vector<Rational> point;
    point.reserve(pt.coords.size());
    for (const auto& c : pt.coords) point.push_back(c.rational_value());
    return p.eval(point).sign();
  }
  std::vector<std::pair<size_t, Rational>> fixing;
  for (size_t i = 0; i < pt.coords.size(); ++i)
    if (static_cast<int>(i) != alg_at) fixing.emplace_back(i, pt.coords[i].rational_value());
  UniPoly u = p.eval_partial(fixing).to_unipoly(static_cast<size_t>(alg_at));
  return sign_at(u, pt.coords[static_cast<size_t>(alg_at)]);
}

int eval_sign(const MultiPoly& p, const AlgebraicPoint& pt, SignTestLedger* ledger, Phase ph) {
  if (ledger) {
    bool derived = p.tainted();
    for (const auto& c : pt.coords) derived = derived || c.tainted();
    if (derived) ledger->record(ph, p.total_degree(), static_cast<int>(p.vars().size()));
  }
  return eval_sign(p, pt);
}

}  // namespace trivar
