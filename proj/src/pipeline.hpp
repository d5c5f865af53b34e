#pragma once

#include <optional>
#include <string>

#include "decision.hpp"
#include "instance.hpp"
#include "product.hpp"

namespace trivar {

// Knobs shared by the decision pipelines. Absent sizes fall back to the
// n-based defaults below. direct_sort replaces the batched block stage by
// individually counted comparisons; it is the scaling baseline, not a fast
// path. drop_pair hides one bottom pair from every search; planted witnesses
// must then go missing, which is how the tests prove the crossing
// enumeration is actually consulted.
struct PipelineOptions {
  std::optional<size_t> g, h;
  uint64_t seed = 1;
  int D = 2;
  std::string provider = "iterated-ham-sandwich";
  bool direct_sort = false;
  std::optional<PairId> drop_pair;
};

// g = max(2, round(n^{2/15})); h = ceil(sqrt(n*g)) clamped to ceil(sqrt(n)).
size_t auto_g_line(size_t n);
size_t auto_h_line(size_t n, size_t g);
// g = max(2, round(n^{2/29})) for the block-of-parameters approach.
size_t auto_g_alt(size_t n);

// Collinearity with C on the x-axis via per-cell sorted phi-lists and
// batched pair comparisons.
Decision collinear_211_line(const Instance& inst, const PipelineOptions& opt = {});

// Single-polynomial vanishing over two parameterized curves: good-fibers
// reduction, degeneracy locus sweep, per-cell merged root lists.
Decision vanish_211_general(const Instance& inst, const PipelineOptions& opt = {});

// Collinearity with both B and C parameterized: per-block line arrangements,
// vertex orders from quadruple-predicate batches, slab binary searches.
Decision collinear_211_alt(const Instance& inst, const PipelineOptions& opt = {});

// A in R^d, B and C on hyperplanes: random central projections down to the
// plane, then collinear_211_line; d-dimensional re-verification of hits.
Decision collinear_highdim(const Instance& inst, const PipelineOptions& opt = {});

// Two-polynomial system semantics: brute force restricted to product cells
// reached by the pi_c surfaces.
Decision vanish_pair_demo(const Instance& inst, const PipelineOptions& opt = {});

// name: 211-line | 211-general | 211-alt | highdim | pair-demo | auto.
Decision run_pipeline(const std::string& name, const Instance& inst,
                      const PipelineOptions& opt = {});

}  // namespace trivar
