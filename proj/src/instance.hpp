#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "curve.hpp"

namespace trivar {

// d-dimensional variant: A anywhere, B on hyperplane h1, C on h2.
// Hyperplanes are coefficient vectors (c0, c1, ..., cd): c0 + sum ci*xi = 0.
struct HighDimInstance {
  int d = 3;
  std::vector<std::vector<Rational>> A, B, C;
  std::vector<Rational> h1, h2;
};

// Problem instance. B and C are given implicitly as parameter lists on their
// curves; parameter lists must avoid curve poles.
struct Instance {
  std::vector<std::array<Rational, 2>> A;
  ParamCurve curveB{UniPoly::x(), UniPoly::x() * UniPoly::x()};
  std::vector<Rational> T;
  ParamCurve curveC = ParamCurve::x_axis();
  std::vector<Rational> S;
  std::optional<MultiPoly> F;  // six-variate predicate; collinearity when absent
  std::optional<MultiPoly> G;  // second predicate for the pair demo
  std::optional<HighDimInstance> highdim;

  std::vector<std::array<Rational, 2>> B_points() const;
  std::vector<std::array<Rational, 2>> C_points() const;
  size_t n() const;  // max of the set sizes

  // Every stored rational is input-derived; evaluations against them meter.
  void mark_tainted();

  std::string to_json(int indent = -1) const;
  static Instance from_json(const std::string& text);
  static Instance load(const std::string& path);
  void save(const std::string& path, int indent = 1) const;

  // Stable hash of the canonical (compact, key-sorted) serialization.
  uint64_t digest() const;
};

// Shared JSON helpers (instance schema pieces reused by reports).
Rational rational_from_json_text(const std::string& field, const std::string& text);

}  // namespace trivar
