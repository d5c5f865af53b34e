#pragma once

#include "curve.hpp"
#include "decision.hpp"
#include "partition.hpp"

namespace trivar {

// Common zero set of the s-coefficient polynomials h_i(x, t): the pairs
// (a, t) where H(a, t, .) is identically zero, so any s completes a triple.
struct DegeneracyLocus {
  std::vector<MultiPoly> generators;  // over (x1, x2, t)
  bool good_fibers = true;
};

DegeneracyLocus degeneracy_locus(const MultiPoly& H);

// H*(s): sum of the squared coefficients of H grouped by (x1, x2, t)
// monomials. Vanishes at s0 iff H(., ., s0) is the zero polynomial.
UniPoly h_star(const MultiPoly& H);

// G(x, s): sum of the squared t-coefficients of H. Vanishes at (a0, s0) iff
// H(a0, ., s0) is identically zero in t.
MultiPoly g_of_condition1(const MultiPoly& H);

struct GoodFibersResult {
  bool resolved = false;
  std::optional<Decision> decision;  // set when resolved
  MultiPoly H;                       // reduced polynomial, common factors removed
  bool good_fibers_certified = false;
  bool irreducibility_warning = true;  // residual factors are user-asserted
  std::vector<std::string> branches;   // reduction steps visited, in order
  nlohmann::json notes = nlohmann::json::object();
};

// Reduction chain: (zero) H identically zero; (independence) H missing one
// of x, t, s collapses to sorted-intersection searches; (s_content) a common
// factor in s alone, detected through the roots of H*; (x_content) a common
// factor h(t, s) of the x-coefficients; (t_lines) lines of Z(H) parallel to
// the t-axis, located through G. Factor removals restart the chain on the
// quotient. Sign tests are charged to the degeneracy phase.
GoodFibersResult good_fibers_reduce_h(const MultiPoly& H_in, const std::vector<Point2>& A,
                                      const std::vector<Rational>& T,
                                      const std::vector<Rational>& S,
                                      SignTestLedger* ledger = nullptr);

GoodFibersResult good_fibers_reduce(const MultiPoly& F, const ParamCurve& gB,
                                    const ParamCurve& gC, const std::vector<Point2>& A,
                                    const std::vector<Rational>& T, const std::vector<Rational>& S,
                                    SignTestLedger* ledger = nullptr);

}  // namespace trivar
