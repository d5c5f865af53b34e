#pragma once

#include <array>
#include <vector>

#include "poly.hpp"

namespace trivar {

// Plane curve with a rational parameterization (x(t)/p(t), y(t)/q(t)).
// Denominators are never the zero polynomial; polynomial parameterizations
// keep them at 1. The x-axis marker is the curve (t, 0).
class ParamCurve {
 public:
  ParamCurve(UniPoly x, UniPoly y);
  ParamCurve(UniPoly x_num, UniPoly x_den, UniPoly y_num, UniPoly y_den);
  static ParamCurve x_axis();

  const UniPoly& x_num() const { return x_num_; }
  const UniPoly& x_den() const { return x_den_; }
  const UniPoly& y_num() const { return y_num_; }
  const UniPoly& y_den() const { return y_den_; }

  bool has_denominators() const;  // any nonconstant denominator
  bool is_x_axis() const;
  int degree_bound() const;

  bool is_pole(const Rational& t) const;
  std::array<Rational, 2> eval(const Rational& t) const;  // error at poles

  // Nonconstant denominators, whose roots are the pole parameters.
  std::vector<UniPoly> pole_polys() const;

  std::string to_string() const;
  uint64_t hash() const;
  void mark_tainted();

 private:
  UniPoly x_num_, x_den_, y_num_, y_den_;
};

// H(x1,x2,t,s) = F(x1,x2,gB(t),gC(s)) scaled by even powers of the curve
// denominators, so sign(H) = sign(F) away from poles.
struct SubstitutionResult {
  MultiPoly H;                    // variables (x1, x2, t, s)
  std::vector<UniPoly> poles_b;   // in t
  std::vector<UniPoly> poles_c;   // in s
};
SubstitutionResult substitute_curves(const MultiPoly& F, const ParamCurve& gB, const ParamCurve& gC);

// Variable order used throughout for substituted predicates.
inline const std::vector<std::string>& hvars() {
  static const std::vector<std::string> v{"x1", "x2", "t", "s"};
  return v;
}
// Variable order for six-variate input predicates F(x1,x2,y1,y2,z1,z2).
inline const std::vector<std::string>& fvars() {
  static const std::vector<std::string> v{"x1", "x2", "y1", "y2", "z1", "z2"};
  return v;
}

// Collinearity of (x1,x2), (y1,y2), (z1,z2): the 3x3 orientation determinant.
MultiPoly collinearity_poly();

}  // namespace trivar
