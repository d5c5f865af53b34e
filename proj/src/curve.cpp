#include "curve.hpp"

#include <algorithm>

namespace trivar {

ParamCurve::ParamCurve(UniPoly x, UniPoly y)
    : x_num_(std::move(x)), x_den_(UniPoly::constant(Rational(1))),
      y_num_(std::move(y)), y_den_(UniPoly::constant(Rational(1))) {}

ParamCurve::ParamCurve(UniPoly x_num, UniPoly x_den, UniPoly y_num, UniPoly y_den)
    : x_num_(std::move(x_num)), x_den_(std::move(x_den)),
      y_num_(std::move(y_num)), y_den_(std::move(y_den)) {
  if (x_den_.is_zero() || y_den_.is_zero()) throw input_error("curve denominator is zero");
}

ParamCurve ParamCurve::x_axis() { return ParamCurve(UniPoly::x(), UniPoly()); }

bool ParamCurve::has_denominators() const {
  return x_den_.degree() > 0 || y_den_.degree() > 0;
}

bool ParamCurve::is_x_axis() const {
  return y_num_.is_zero() && x_den_.degree() == 0 && x_num_ == UniPoly::x().scaled(x_den_.coef(0));
}

int ParamCurve::degree_bound() const {
  return std::max({x_num_.degree(), x_den_.degree(), y_num_.degree(), y_den_.degree(), 1});
}

bool ParamCurve::is_pole(const Rational& t) const {
  return x_den_.sign_at(t) == 0 || y_den_.sign_at(t) == 0;
}

std::array<Rational, 2> ParamCurve::eval(const Rational& t) const {
  if (is_pole(t)) throw domain_error("curve evaluated at a pole");
  return {x_num_.eval(t) / x_den_.eval(t), y_num_.eval(t) / y_den_.eval(t)};
}

std::vector<UniPoly> ParamCurve::pole_polys() const {
  std::vector<UniPoly> out;
  if (x_den_.degree() > 0) out.push_back(x_den_);
  if (y_den_.degree() > 0 && !(y_den_ == x_den_)) out.push_back(y_den_);
  return out;
}

std::string ParamCurve::to_string() const {
  if (is_x_axis()) return "x-axis";
  std::string s = "(" + x_num_.to_string();
  if (x_den_.degree() > 0 || !(x_den_.coef(0) == Rational(1))) s += " / " + x_den_.to_string();
  s += ", " + y_num_.to_string();
  if (y_den_.degree() > 0 || !(y_den_.coef(0) == Rational(1))) s += " / " + y_den_.to_string();
  return s + ")";
}

void ParamCurve::mark_tainted() {
  x_num_.mark_tainted();
  x_den_.mark_tainted();
  y_num_.mark_tainted();
  y_den_.mark_tainted();
}

uint64_t ParamCurve::hash() const {
  uint64_t h = hash_mix(x_num_.hash(), x_den_.hash());
  return hash_mix(h, hash_mix(y_num_.hash(), y_den_.hash()));
}

MultiPoly collinearity_poly() {
  auto v = [](const char* n) { return MultiPoly::var(fvars(), n); };
  return (v("y1") - v("x1")) * (v("z2") - v("x2")) - (v("y2") - v("x2")) * (v("z1") - v("x1"));
}

namespace {

std::vector<UniPoly> power_table(const UniPoly& p, int max_exp) {
  std::vector<UniPoly> t;
  t.reserve(static_cast<size_t>(max_exp) + 1);
  t.push_back(UniPoly::constant(Rational(1)));
  for (int i = 1; i <= max_exp; ++i) t.push_back(t.back() * p);
  return t;
}

int even_at_least(int d) { return d % 2 == 0 ? d : d + 1; }

}  // namespace

SubstitutionResult substitute_curves(const MultiPoly& F, const ParamCurve& gB, const ParamCurve& gC) {
  if (F.vars().size() != 6) throw input_error("substitute_curves needs a six-variate predicate");

  const int dy1 = std::max(F.degree(2), 0), dy2 = std::max(F.degree(3), 0);
  const int dz1 = std::max(F.degree(4), 0), dz2 = std::max(F.degree(5), 0);
  // Even clearing exponents keep the correction factor positive off poles.
  const int Exb = even_at_least(dy1), Eyb = even_at_least(dy2);
  const int Exc = even_at_least(dz1), Eyc = even_at_least(dz2);

  auto xb = power_table(gB.x_num(), dy1), qxb = power_table(gB.x_den(), Exb);
  auto yb = power_table(gB.y_num(), dy2), qyb = power_table(gB.y_den(), Eyb);
  auto xc = power_table(gC.x_num(), dz1), qxc = power_table(gC.x_den(), Exc);
  auto yc = power_table(gC.y_num(), dz2), qyc = power_table(gC.y_den(), Eyc);

  const size_t T = 2, S = 3;  // indices in hvars()
  MultiPoly H(hvars());
  for (const auto& term : F.terms()) {
    const auto& e = term.exps;
    UniPoly tp = xb[e[2]] * qxb[static_cast<size_t>(Exb) - e[2]] *
                 yb[e[3]] * qyb[static_cast<size_t>(Eyb) - e[3]];
    UniPoly sp = xc[e[4]] * qxc[static_cast<size_t>(Exc) - e[4]] *
                 yc[e[5]] * qyc[static_cast<size_t>(Eyc) - e[5]];
    if (tp.is_zero() || sp.is_zero()) continue;
    MultiPoly part = MultiPoly::from_unipoly(tp, hvars(), T) * MultiPoly::from_unipoly(sp, hvars(), S);
    MultiPoly head = MultiPoly::from_terms(
        hvars(), {MultiPoly::Term{{e[0], e[1], 0u, 0u}, term.coef}});
    H = H + head * part;
  }
  return {std::move(H), gB.pole_polys(), gC.pole_polys()};
}

}  // namespace trivar
