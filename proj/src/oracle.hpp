#pragma once

#include <span>

#include "instance.hpp"
#include "meter.hpp"

namespace trivar {

// Index triple into (A, B, C) in instance order.
struct Triple {
  size_t i, j, k;
  friend bool operator==(const Triple&, const Triple&) = default;
};

// Orientation sign of the planar triangle (a, b, c); 0 iff collinear.
int orient(const std::array<Rational, 2>& a, const std::array<Rational, 2>& b,
           const std::array<Rational, 2>& c);

// Exact rank test: true iff b-a and c-a are parallel (d >= 2).
bool collinear_ddim(std::span<const Rational> a, std::span<const Rational> b,
                    std::span<const Rational> c);

// Exhaustive deciders. No early exit; one counted sign test per triple
// (plus one for G on triples where F vanishes, for the pair form).
std::vector<Triple> brute_collinear(const std::vector<std::array<Rational, 2>>& A,
                                    const std::vector<std::array<Rational, 2>>& B,
                                    const std::vector<std::array<Rational, 2>>& C,
                                    SignTestLedger* ledger = nullptr);
std::vector<Triple> brute_vanish(const MultiPoly& F, const MultiPoly* G,
                                 const std::vector<std::array<Rational, 2>>& A,
                                 const std::vector<std::array<Rational, 2>>& B,
                                 const std::vector<std::array<Rational, 2>>& C,
                                 SignTestLedger* ledger = nullptr);
std::vector<Triple> brute_collinear_ddim(const std::vector<std::vector<Rational>>& A,
                                         const std::vector<std::vector<Rational>>& B,
                                         const std::vector<std::vector<Rational>>& C,
                                         SignTestLedger* ledger = nullptr);

// Oracle verdict for a whole instance, picking the right decider.
bool oracle_has_triple(const Instance& inst, SignTestLedger* ledger = nullptr);

// Reproducible generation. Same spec => identical instance, any platform.
struct InstanceSpec {
  std::string family = "uniform-random";
  // uniform-random | planted-collinear | planted-sparse | planted-vanishing |
  // on-curves | grid | near-degenerate | highdim-flats
  size_t n = 16;
  uint64_t seed = 1;
  std::string curve_b = "parabola";
  std::string curve_c = "x-axis";
  std::string predicate = "collinear";  // collinear | unit-area | pair (planted-vanishing)
  long long mag = 1 << 16;              // coordinate magnitude bound
  int perturb_k = 40;                   // near-degenerate offset 2^-k
  int d = 3;                            // highdim-flats dimension
  bool plant = false;                   // plant a witness in highdim-flats
  bool parallel_flats = false;          // highdim-flats: parallel hyperplanes
};

// parabola | x-axis | line | hline | cubic | circle | hyperbola
ParamCurve named_curve(const std::string& name);

Instance generate(const InstanceSpec& spec);

}  // namespace trivar
