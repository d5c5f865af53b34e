#pragma once

#include <nlohmann/json.hpp>
#include <optional>

#include "meter.hpp"
#include "rational.hpp"

namespace trivar {

// Exact witness triple. Planar pipelines fill a/t/s (with indices into
// A/T/S); the d-dimensional pipeline fills the coordinate vectors instead.
struct Witness {
  size_t ia = 0, ib = 0, ic = 0;
  std::array<Rational, 2> a{};
  Rational t, s;
  std::vector<Rational> a_d, b_d, c_d;

  nlohmann::json to_json() const;
};

struct Decision {
  bool found = false;
  std::optional<Witness> witness;
  SignTestLedger ledger;
  nlohmann::json diagnostics = nlohmann::json::object();

  static Decision not_found() { return {}; }
  std::string to_json(int indent = -1) const;
};

}  // namespace trivar
