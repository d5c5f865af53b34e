#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "interval.hpp"
#include "rational.hpp"

namespace trivar {

// Dense univariate polynomial, coefficients low-degree first, normalized
// (no trailing zero coefficients; the zero polynomial has no coefficients).
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coefs) : c_(std::move(coefs)) { trim(); }
  static UniPoly constant(Rational v);
  static UniPoly x();  // the monomial t

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& coef(size_t i) const;
  const std::vector<Rational>& coefs() const { return c_; }
  const Rational& lead() const;

  Rational eval(const Rational& t) const;
  RatInterval eval(const RatInterval& t) const;
  int sign_at(const Rational& t) const { return eval(t).sign(); }

  UniPoly derivative() const;
  UniPoly operator-() const;
  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  UniPoly scaled(const Rational& v) const;
  friend bool operator==(const UniPoly& a, const UniPoly& b);

  // Euclidean division; remainder has degree < deg(d). d must be nonzero.
  static std::pair<UniPoly, UniPoly> divmod(const UniPoly& n, const UniPoly& d);

  // Monic gcd; gcd(0, 0) is an error.
  static UniPoly gcd(const UniPoly& a, const UniPoly& b);

  UniPoly monic() const;

  // Integer-content-free form with positive leading coefficient.
  UniPoly primitive() const;

  // Yun decomposition: returns f1, f2, ... with p ~ prod fi^i, fi squarefree
  // and pairwise coprime (some fi may be constant 1).
  std::vector<UniPoly> squarefree_decomposition() const;
  UniPoly squarefree_part() const;

  // Cauchy bound: all real roots lie in (-B, B).
  Rational root_bound() const;

  std::string to_string(const std::string& var = "t") const;
  uint64_t hash() const;
  bool tainted() const;
  void mark_tainted();

 private:
  void trim();
  std::vector<Rational> c_;
};

// Sparse multivariate polynomial over a fixed, ordered variable universe.
// Terms are kept sorted by exponent vector (lex over the universe order)
// with no zero coefficients, so representation is canonical.
class MultiPoly {
 public:
  struct Term {
    std::vector<unsigned> exps;
    Rational coef;
  };

  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}
  static MultiPoly constant(std::vector<std::string> vars, Rational v);
  static MultiPoly var(std::vector<std::string> vars, const std::string& name, unsigned power = 1);
  static MultiPoly from_terms(std::vector<std::string> vars, std::vector<Term> terms);

  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && total_exp(terms_[0]) == 0); }
  Rational constant_value() const;

  size_t var_index(const std::string& name) const;  // throws if absent
  int degree(size_t var) const;
  int total_degree() const;
  bool depends_on(size_t var) const { return degree(var) > 0; }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly operator-() const;
  MultiPoly scaled(const Rational& v) const;
  MultiPoly pow(unsigned e) const;
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

  MultiPoly derivative(size_t var) const;

  Rational eval(std::span<const Rational> point) const;
  RatInterval eval(std::span<const RatInterval> box) const;
  FloatInterval eval(std::span<const FloatInterval> box) const;

  // Partial evaluation: fixes the given variables, keeps the universe.
  MultiPoly eval_partial(const std::vector<std::pair<size_t, Rational>>& fixing) const;

  // Coefficients as polynomials in the remaining variables: index i holds
  // the coefficient of var^i (variable exponent zeroed, universe kept).
  std::vector<MultiPoly> coefficients_in(size_t var) const;

  // Rebuild sum(coefs[i] * var^i).
  static MultiPoly from_coefficients(size_t var, const std::vector<MultiPoly>& coefs,
                                     const std::vector<std::string>& vars);

  // Collapse to a univariate polynomial; every other variable must be absent.
  UniPoly to_unipoly(size_t var) const;
  static MultiPoly from_unipoly(const UniPoly& p, std::vector<std::string> vars, size_t var);

  // Map this polynomial into a larger universe (old vars must all appear).
  MultiPoly embedded(const std::vector<std::string>& new_vars) const;

  // Integer content: positive rational c with p/c having coprime integer
  // coefficients. content(2x + 4y) == 2, content(0) == 0.
  Rational content() const;
  MultiPoly primitive_part() const;  // content-free, sign-normalized

  // Exact multivariate division; nullopt when b does not divide a.
  static std::optional<MultiPoly> div_exact(const MultiPoly& a, const MultiPoly& b);

  // Multivariate gcd (primitive PRS), normalized primitive with positive
  // leading coefficient; gcd(0, 0) is an error.
  static MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

  // Sylvester resultant eliminating `var`: p-coefficient block (deg q rows)
  // on top, q-block below, descending coefficient order, Bareiss expansion.
  static MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, size_t var);

  std::string to_string() const;
  uint64_t hash() const;
  bool tainted() const;
  void mark_tainted();

 private:
  static unsigned total_exp(const Term& t);
  void normalize();
  std::vector<std::string> vars_;
  std::vector<Term> terms_;
};

}  // namespace trivar
