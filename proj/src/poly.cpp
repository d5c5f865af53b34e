#include "poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace trivar {

// ---------------------------------------------------------------- UniPoly

void UniPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

UniPoly UniPoly::constant(Rational v) {
  UniPoly p;
  if (!v.is_zero()) p.c_.push_back(std::move(v));
  return p;
}

UniPoly UniPoly::x() { return UniPoly({Rational(0), Rational(1)}); }

const Rational& UniPoly::coef(size_t i) const {
  static const Rational zero(0);
  return i < c_.size() ? c_[i] : zero;
}

const Rational& UniPoly::lead() const {
  if (c_.empty()) throw domain_error("leading coefficient of zero polynomial");
  return c_.back();
}

Rational UniPoly::eval(const Rational& t) const {
  Rational acc(0);
  for (size_t i = c_.size(); i-- > 0;) {
    acc *= t;
    acc += c_[i];
  }
  return acc;
}

RatInterval UniPoly::eval(const RatInterval& t) const {
  RatInterval acc{Rational(0)};
  for (size_t i = c_.size(); i-- > 0;) {
    acc = acc * t + RatInterval(c_[i]);
  }
  return acc;
}

UniPoly UniPoly::derivative() const {
  UniPoly d;
  for (size_t i = 1; i < c_.size(); ++i) d.c_.push_back(c_[i] * Rational(static_cast<long>(i)));
  d.trim();
  return d;
}

UniPoly UniPoly::operator-() const {
  UniPoly r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  UniPoly r;
  r.c_.resize(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coef(i) + b.coef(i);
  r.trim();
  return r;
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) {
  UniPoly r;
  r.c_.resize(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coef(i) - b.coef(i);
  r.trim();
  return r;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return UniPoly();
  UniPoly r;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  r.trim();
  return r;
}

UniPoly UniPoly::scaled(const Rational& v) const {
  if (v.is_zero()) return UniPoly();
  UniPoly r = *this;
  for (auto& c : r.c_) c *= v;
  return r;
}

bool operator==(const UniPoly& a, const UniPoly& b) {
  if (a.c_.size() != b.c_.size()) return false;
  for (size_t i = 0; i < a.c_.size(); ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return true;
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& n, const UniPoly& d) {
  if (d.is_zero()) throw domain_error("polynomial division by zero");
  UniPoly q, r = n;
  int dd = d.degree();
  Rational inv_lead = d.lead().inverse();
  while (!r.is_zero() && r.degree() >= dd) {
    int shift = r.degree() - dd;
    Rational f = r.lead() * inv_lead;
    if (q.c_.size() < static_cast<size_t>(shift + 1)) q.c_.resize(shift + 1, Rational(0));
    q.c_[shift] += f;
    for (size_t i = 0; i < d.c_.size(); ++i) r.c_[i + shift] -= f * d.c_[i];
    r.trim();
  }
  q.trim();
  return {std::move(q), std::move(r)};
}

UniPoly UniPoly::gcd(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() && b.is_zero()) throw domain_error("gcd(0, 0) undefined");
  UniPoly x = a, y = b;
  while (!y.is_zero()) {
    UniPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(lead().inverse());
}

UniPoly UniPoly::primitive() const {
  if (is_zero()) return *this;
  mpz_class den_lcm(1);
  for (const auto& c : c_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.den().get_mpz_t());
  mpz_class num_gcd(0);
  for (const auto& c : c_) {
    mpz_class scaled = c.num() * (den_lcm / c.den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  UniPoly r = scaled(lead().sign() < 0 ? -scale : scale);
  return r;
}

std::vector<UniPoly> UniPoly::squarefree_decomposition() const {
  // Yun's algorithm over Q.
  if (is_zero()) throw domain_error("squarefree decomposition of zero polynomial");
  std::vector<UniPoly> out;
  if (degree() == 0) return out;
  UniPoly d = derivative();
  UniPoly a = gcd(*this, d);
  UniPoly b = divmod(*this, a).first;
  UniPoly c = divmod(d, a).first;
  UniPoly z = c - b.derivative();
  while (true) {
    if (b.degree() == 0) break;
    UniPoly f = z.is_zero() ? UniPoly::constant(Rational(1)) : gcd(b, z);
    if (z.is_zero()) {
      out.push_back(b.monic());
      break;
    }
    out.push_back(f.monic());
    b = divmod(b, f).first;
    z = divmod(z, f).first - b.derivative();
  }
  return out;
}

UniPoly UniPoly::squarefree_part() const {
  if (is_zero()) throw domain_error("squarefree part of zero polynomial");
  if (degree() <= 1) return monic();
  UniPoly g = gcd(*this, derivative());
  if (g.degree() == 0) return monic();
  return divmod(*this, g).first.monic();
}

Rational UniPoly::root_bound() const {
  if (is_zero() || degree() == 0) return Rational(1);
  Rational m(0);
  Rational linv = lead().abs().inverse();
  for (size_t i = 0; i + 1 < c_.size(); ++i) m = std::max(m, c_[i].abs() * linv);
  return m + Rational(1);
}

std::string UniPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    os << c_[i].to_string();
    if (i >= 1) os << "*" << var;
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

uint64_t UniPoly::hash() const {
  uint64_t h = 0x75d1e9c3ULL;
  for (const auto& c : c_) h = hash_mix(h, c.hash());
  return h;
}

bool UniPoly::tainted() const {
  for (const auto& c : c_)
    if (c.tainted()) return true;
  return false;
}

void UniPoly::mark_tainted() {
  for (auto& c : c_) c.mark_tainted();
}

// -------------------------------------------------------------- MultiPoly

unsigned MultiPoly::total_exp(const Term& t) {
  unsigned s = 0;
  for (unsigned e : t.exps) s += e;
  return s;
}

void MultiPoly::normalize() {
  for (auto& t : terms_) {
    if (t.exps.size() != vars_.size()) throw internal_error("exponent arity mismatch");
  }
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.exps < b.exps; });
  std::vector<Term> out;
  for (auto& t : terms_) {
    if (!out.empty() && out.back().exps == t.exps) {
      out.back().coef += t.coef;
    } else {
      out.push_back(std::move(t));
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coef.is_zero(); }),
            out.end());
  terms_ = std::move(out);
}

MultiPoly MultiPoly::constant(std::vector<std::string> vars, Rational v) {
  MultiPoly p(std::move(vars));
  if (!v.is_zero()) p.terms_.push_back({std::vector<unsigned>(p.vars_.size(), 0), std::move(v)});
  return p;
}

MultiPoly MultiPoly::var(std::vector<std::string> vars, const std::string& name, unsigned power) {
  MultiPoly p(std::move(vars));
  std::vector<unsigned> e(p.vars_.size(), 0);
  e[p.var_index(name)] = power;
  p.terms_.push_back({std::move(e), Rational(1)});
  return p;
}

MultiPoly MultiPoly::from_terms(std::vector<std::string> vars, std::vector<Term> terms) {
  MultiPoly p(std::move(vars));
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

Rational MultiPoly::constant_value() const {
  if (is_zero()) return Rational(0);
  if (!is_constant()) throw domain_error("constant_value of non-constant polynomial");
  return terms_[0].coef;
}

size_t MultiPoly::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return i;
  throw input_error("unknown variable: " + name);
}

int MultiPoly::degree(size_t var) const {
  int d = is_zero() ? -1 : 0;
  for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.exps[var]));
  return d;
}

int MultiPoly::total_degree() const {
  int d = is_zero() ? -1 : 0;
  for (const auto& t : terms_) d = std::max(d, static_cast<int>(total_exp(t)));
  return d;
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
  if (a.vars_ != b.vars_) throw internal_error("variable universe mismatch in +");
  MultiPoly r(a.vars_);
  r.terms_ = a.terms_;
  r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
  r.normalize();
  return r;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.vars_ != b.vars_) throw internal_error("variable universe mismatch in *");
  MultiPoly r(a.vars_);
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      MultiPoly::Term t;
      t.exps.resize(a.vars_.size());
      for (size_t i = 0; i < t.exps.size(); ++i) t.exps[i] = ta.exps[i] + tb.exps[i];
      t.coef = ta.coef * tb.coef;
      r.terms_.push_back(std::move(t));
    }
  r.normalize();
  return r;
}

MultiPoly MultiPoly::scaled(const Rational& v) const {
  if (v.is_zero()) return MultiPoly(vars_);
  MultiPoly r = *this;
  for (auto& t : r.terms_) t.coef *= v;
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly r = MultiPoly::constant(vars_, Rational(1));
  for (unsigned i = 0; i < e; ++i) r = r * *this;
  return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.vars_ != b.vars_ || a.terms_.size() != b.terms_.size()) return false;
  for (size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coef != b.terms_[i].coef) return false;
  }
  return true;
}

MultiPoly MultiPoly::derivative(size_t var) const {
  MultiPoly r(vars_);
  for (const auto& t : terms_) {
    if (t.exps[var] == 0) continue;
    Term d = t;
    d.coef *= Rational(static_cast<long>(d.exps[var]));
    d.exps[var] -= 1;
    r.terms_.push_back(std::move(d));
  }
  r.normalize();
  return r;
}

Rational MultiPoly::eval(std::span<const Rational> point) const {
  if (point.size() != vars_.size()) throw internal_error("eval arity mismatch");
  Rational acc(0);
  for (const auto& t : terms_) {
    Rational v = t.coef;
    for (size_t i = 0; i < point.size(); ++i)
      for (unsigned e = 0; e < t.exps[i]; ++e) v *= point[i];
    acc += v;
  }
  return acc;
}

RatInterval MultiPoly::eval(std::span<const RatInterval> box) const {
  if (box.size() != vars_.size()) throw internal_error("eval arity mismatch");
  RatInterval acc{Rational(0)};
  for (const auto& t : terms_) {
    RatInterval v{Rational(1)};
    for (size_t i = 0; i < box.size(); ++i)
      if (t.exps[i] > 0) v = v * box[i].pow(t.exps[i]);
    acc = acc + v.scaled(t.coef);
  }
  return acc;
}

FloatInterval MultiPoly::eval(std::span<const FloatInterval> box) const {
  if (box.size() != vars_.size()) throw internal_error("eval arity mismatch");
  FloatInterval acc(0, 0);
  for (const auto& t : terms_) {
    FloatInterval v(1, 1);
    for (size_t i = 0; i < box.size(); ++i)
      if (t.exps[i] > 0) v = v * box[i].pow(t.exps[i]);
    acc = acc + v.scaled(t.coef.to_double());
  }
  return acc;
}

MultiPoly MultiPoly::eval_partial(const std::vector<std::pair<size_t, Rational>>& fixing) const {
  MultiPoly r(vars_);
  for (const auto& t : terms_) {
    Term nt = t;
    for (const auto& [var, val] : fixing) {
      for (unsigned e = 0; e < t.exps[var]; ++e) nt.coef *= val;
      nt.exps[var] = 0;
    }
    r.terms_.push_back(std::move(nt));
  }
  r.normalize();
  return r;
}

std::vector<MultiPoly> MultiPoly::coefficients_in(size_t var) const {
  int d = degree(var);
  std::vector<MultiPoly> out(static_cast<size_t>(std::max(d, 0)) + 1, MultiPoly(vars_));
  for (const auto& t : terms_) {
    Term nt = t;
    unsigned e = nt.exps[var];
    nt.exps[var] = 0;
    out[e].terms_.push_back(std::move(nt));
  }
  for (auto& p : out) p.normalize();
  return out;
}

MultiPoly MultiPoly::from_coefficients(size_t var, const std::vector<MultiPoly>& coefs,
                                       const std::vector<std::string>& vars) {
  MultiPoly r(vars);
  for (size_t i = 0; i < coefs.size(); ++i) {
    for (const auto& t : coefs[i].terms_) {
      Term nt = t;
      nt.exps[var] += static_cast<unsigned>(i);
      r.terms_.push_back(std::move(nt));
    }
  }
  r.normalize();
  return r;
}

UniPoly MultiPoly::to_unipoly(size_t var) const {
  std::vector<Rational> c(static_cast<size_t>(std::max(degree(var), 0)) + 1, Rational(0));
  for (const auto& t : terms_) {
    for (size_t i = 0; i < vars_.size(); ++i)
      if (i != var && t.exps[i] != 0) throw domain_error("to_unipoly: polynomial not univariate");
    c[t.exps[var]] += t.coef;
  }
  return UniPoly(std::move(c));
}

MultiPoly MultiPoly::from_unipoly(const UniPoly& p, std::vector<std::string> vars, size_t var) {
  MultiPoly r(std::move(vars));
  for (size_t i = 0; i < p.coefs().size(); ++i) {
    if (p.coefs()[i].is_zero()) continue;
    Term t;
    t.exps.assign(r.vars_.size(), 0);
    t.exps[var] = static_cast<unsigned>(i);
    t.coef = p.coefs()[i];
    r.terms_.push_back(std::move(t));
  }
  r.normalize();
  return r;
}

MultiPoly MultiPoly::embedded(const std::vector<std::string>& new_vars) const {
  std::vector<size_t> where(vars_.size());
  for (size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::find(new_vars.begin(), new_vars.end(), vars_[i]);
    if (it == new_vars.end()) throw internal_error("embedded: missing variable " + vars_[i]);
    where[i] = static_cast<size_t>(it - new_vars.begin());
  }
  MultiPoly r(new_vars);
  for (const auto& t : terms_) {
    Term nt;
    nt.exps.assign(new_vars.size(), 0);
    for (size_t i = 0; i < vars_.size(); ++i) nt.exps[where[i]] = t.exps[i];
    nt.coef = t.coef;
    r.terms_.push_back(std::move(nt));
  }
  r.normalize();
  return r;
}

Rational MultiPoly::content() const {
  if (is_zero()) return Rational(0);
  mpz_class den_lcm(1);
  for (const auto& t : terms_)
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coef.den().get_mpz_t());
  mpz_class num_gcd(0);
  for (const auto& t : terms_) {
    mpz_class s = t.coef.num() * (den_lcm / t.coef.den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), s.get_mpz_t());
  }
  return Rational(num_gcd, den_lcm);
}

MultiPoly MultiPoly::primitive_part() const {
  if (is_zero()) return *this;
  Rational c = content();
  MultiPoly r = scaled(c.inverse());
  if (r.terms_.back().coef.sign() < 0) r = -r;
  return r;
}

std::optional<MultiPoly> MultiPoly::div_exact(const MultiPoly& a, const MultiPoly& b) {
  if (a.vars_ != b.vars_) throw internal_error("variable universe mismatch in div_exact");
  if (b.is_zero()) throw domain_error("exact division by zero");
  MultiPoly rem = a;
  MultiPoly quot(a.vars_);
  const Term& blead = b.terms_.back();  // lex-max term
  while (!rem.is_zero()) {
    const Term& rlead = rem.terms_.back();
    Term q;
    q.exps.resize(rlead.exps.size());
    bool divisible = true;
    for (size_t i = 0; i < q.exps.size(); ++i) {
      if (rlead.exps[i] < blead.exps[i]) {
        divisible = false;
        break;
      }
      q.exps[i] = rlead.exps[i] - blead.exps[i];
    }
    if (!divisible) return std::nullopt;
    q.coef = rlead.coef / blead.coef;
    MultiPoly qm(a.vars_);
    qm.terms_.push_back(q);
    quot.terms_.push_back(q);
    rem = rem - qm * b;
  }
  quot.normalize();
  return quot;
}

namespace {

// Pseudo-remainder of a by b in variable `var`: lc(b)^(da-db+1) * a mod b.
MultiPoly pseudo_rem(const MultiPoly& a, const MultiPoly& b, size_t var) {
  int da = a.degree(var), db = b.degree(var);
  if (db < 0) throw domain_error("pseudo_rem by zero");
  auto bc = b.coefficients_in(var);
  MultiPoly lb = bc.back();
  MultiPoly rem = a;
  while (!rem.is_zero() && rem.degree(var) >= db) {
    auto rc = rem.coefficients_in(var);
    int dr = rem.degree(var);
    MultiPoly lr = rc.back();
    // rem = lb*rem - lr*var^(dr-db)*b
    MultiPoly shift = MultiPoly::var(rem.vars(), rem.vars()[var], static_cast<unsigned>(dr - db));
    if (dr == db) shift = MultiPoly::constant(rem.vars(), Rational(1));
    rem = rem * lb - lr * shift * b;
    if (!rem.is_zero() && rem.degree(var) >= dr) throw internal_error("pseudo_rem did not reduce");
  }
  (void)da;
  return rem;
}

// gcd of the coefficients of p viewed in `var` (the content in that variable).
MultiPoly var_content(const MultiPoly& p, size_t var) {
  auto cs = p.coefficients_in(var);
  MultiPoly g(p.vars());
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c : MultiPoly::gcd(g, c);
    if (g.is_constant()) break;
  }
  return g.is_zero() ? MultiPoly::constant(p.vars(), Rational(1)) : g;
}

}  // namespace

MultiPoly MultiPoly::gcd(const MultiPoly& a, const MultiPoly& b) {
  if (a.vars_ != b.vars_) throw internal_error("variable universe mismatch in gcd");
  if (a.is_zero() && b.is_zero()) throw domain_error("gcd(0, 0) undefined");
  if (a.is_zero()) return b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  if (a.is_constant() || b.is_constant()) return constant(a.vars_, Rational(1));

  // Main variable: highest index on which either depends.
  size_t var = 0;
  bool found = false;
  for (size_t i = a.vars_.size(); i-- > 0;) {
    if (a.depends_on(i) || b.depends_on(i)) {
      var = i;
      found = true;
      break;
    }
  }
  if (!found) return constant(a.vars_, Rational(1));

  if (!a.depends_on(var)) return gcd(var_content(b, var), a).primitive_part();
  if (!b.depends_on(var)) return gcd(var_content(a, var), b).primitive_part();

  MultiPoly ca = var_content(a, var);
  MultiPoly cb = var_content(b, var);
  MultiPoly cg = gcd(ca, cb);
  MultiPoly pa = *div_exact(a, ca);
  MultiPoly pb = *div_exact(b, cb);
  if (pa.degree(var) < pb.degree(var)) std::swap(pa, pb);
  // Primitive PRS: re-primitivize each pseudo-remainder.
  while (true) {
    MultiPoly r = pseudo_rem(pa, pb, var);
    if (r.is_zero()) break;
    if (r.degree(var) == 0) {
      pb = constant(a.vars_, Rational(1));
      break;
    }
    MultiPoly rc = var_content(r, var);
    r = *div_exact(r, rc);
    pa = std::move(pb);
    pb = std::move(r);
  }
  if (pb.is_constant()) return cg.primitive_part();
  // Strip residual content that pseudo-division may have introduced.
  MultiPoly pc = var_content(pb, var);
  pb = *div_exact(pb, pc);
  return (cg * pb).primitive_part();
}

MultiPoly MultiPoly::resultant(const MultiPoly& p, const MultiPoly& q, size_t var) {
  if (p.vars_ != q.vars_) throw internal_error("variable universe mismatch in resultant");
  int dp = p.degree(var), dq = q.degree(var);
  if (dp <= 0 && dq <= 0) throw domain_error("resultant: nothing to eliminate");
  if (dp <= 0 || dq <= 0) throw domain_error("resultant: both arguments need positive degree in the variable");
  auto pc = p.coefficients_in(var);
  auto qc = q.coefficients_in(var);
  size_t n = static_cast<size_t>(dp + dq);
  MultiPoly zero(p.vars_);
  std::vector<std::vector<MultiPoly>> m(n, std::vector<MultiPoly>(n, zero));
  // p-block: dq rows, descending coefficients; q-block below, dp rows.
  for (int r = 0; r < dq; ++r)
    for (int k = 0; k <= dp; ++k) m[r][r + k] = pc[static_cast<size_t>(dp - k)];
  for (int r = 0; r < dp; ++r)
    for (int k = 0; k <= dq; ++k) m[dq + r][r + k] = qc[static_cast<size_t>(dq - k)];

  // Bareiss fraction-free elimination; exact divisions stay polynomial.
  MultiPoly prev = constant(p.vars_, Rational(1));
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return zero;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        MultiPoly t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        auto d = div_exact(t, prev);
        if (!d) throw internal_error("Bareiss division failed");
        m[i][j] = std::move(*d);
      }
      m[i][k] = zero;
    }
    prev = m[k][k];
  }
  MultiPoly det = m[n - 1][n - 1];
  return sign < 0 ? -det : det;
}

std::string MultiPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    os << it->coef.to_string();
    for (size_t i = 0; i < vars_.size(); ++i) {
      if (it->exps[i] == 0) continue;
      os << "*" << vars_[i];
      if (it->exps[i] > 1) os << "^" << it->exps[i];
    }
    first = false;
  }
  return os.str();
}

uint64_t MultiPoly::hash() const {
  uint64_t h = 0x6d73ULL;
  for (const auto& v : vars_) h = hash_bytes(v.data(), v.size(), h);
  for (const auto& t : terms_) {
    for (unsigned e : t.exps) h = hash_mix(h, e);
    h = hash_mix(h, t.coef.hash());
  }
  return h;
}

bool MultiPoly::tainted() const {
  for (const auto& t : terms_)
    if (t.coef.tainted()) return true;
  return false;
}

void MultiPoly::mark_tainted() {
  for (auto& t : terms_) t.coef.mark_tainted();
}

}  // namespace trivar
