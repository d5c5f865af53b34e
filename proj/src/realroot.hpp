#pragma once

#include <optional>
#include <vector>

#include "meter.hpp"
#include "poly.hpp"

namespace trivar {

// Sturm chain of a squarefree polynomial; counts real roots exactly.
class SturmChain {
 public:
  explicit SturmChain(const UniPoly& squarefree);
  // Number of roots in the open interval (a, b); endpoints must not be roots.
  int count(const Rational& a, const Rational& b) const;
  int variations_at(const Rational& t) const;

 private:
  std::vector<UniPoly> chain_;
};

// Real algebraic number: squarefree defining polynomial plus an isolating
// open interval (lo, hi) holding exactly one root, endpoints non-roots.
// Rational values collapse to lo == hi.
class RealAlgebraic {
 public:
  static RealAlgebraic from_rational(Rational q);
  // def must be squarefree with exactly one root in (lo, hi), def(lo) != 0 != def(hi).
  static RealAlgebraic from_isolated(UniPoly def, Rational lo, Rational hi);

  bool is_rational() const { return rational_.has_value(); }
  const Rational& rational_value() const;
  const UniPoly& defining() const { return def_; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }

  void refine();  // halve the isolating interval (may collapse to rational)
  void refine_below(const Rational& width);

  // Exact three-way comparisons.
  static int cmp(const RealAlgebraic& a, const RealAlgebraic& b);
  static int cmp(const RealAlgebraic& a, const Rational& q);

  friend bool operator==(const RealAlgebraic& a, const RealAlgebraic& b) { return cmp(a, b) == 0; }
  friend bool operator<(const RealAlgebraic& a, const RealAlgebraic& b) { return cmp(a, b) < 0; }

  Rational approx() const { return Rational::mid(lo_, hi_); }
  std::string to_string() const;
  uint64_t hash_interval_free() const;  // defining polynomial only
  bool tainted() const { return def_.tainted(); }

 private:
  UniPoly def_;
  Rational lo_, hi_;
  mutable std::optional<Rational> rational_;
};

struct RootWithMultiplicity {
  RealAlgebraic root;
  int multiplicity;
};

// All real roots of p in ascending order with multiplicities.
// p == 0 is an error ("identically zero"); constants have no roots.
std::vector<RootWithMultiplicity> real_roots(const UniPoly& p);

// Roots without multiplicity bookkeeping (of the squarefree part).
std::vector<RealAlgebraic> real_roots_distinct(const UniPoly& p);

// Exact sign of a univariate polynomial at a real algebraic point.
int sign_at(const UniPoly& p, const RealAlgebraic& x);

// Exact sign of a multivariate polynomial at a point with at most one
// non-rational coordinate. More than one algebraic coordinate is rejected.
struct AlgebraicPoint {
  std::vector<RealAlgebraic> coords;
};
int eval_sign(const MultiPoly& p, const AlgebraicPoint& pt);

// Metered variant: charges one (degree, arity) test to the ledger when any
// argument is input-derived (tainted). Kernel stays unmetered when ledger
// is null or nothing is tainted.
int eval_sign(const MultiPoly& p, const AlgebraicPoint& pt, SignTestLedger* ledger, Phase ph);

}  // namespace trivar
