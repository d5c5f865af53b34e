#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rational.hpp"

namespace trivar {

// Closed rational interval [lo, hi]. Endpoints exact, so enclosure is tight
// for single operations; products of intervals stay conservative.
struct RatInterval {
  Rational lo, hi;

  RatInterval() = default;
  RatInterval(Rational v) : lo(v), hi(std::move(v)) {}  // NOLINT
  RatInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {}

  bool is_point() const { return lo == hi; }
  bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }

  // Sign of every value in the interval, or 0 when undetermined/mixed.
  // A point interval at zero reports 0 via `certainly_zero`.
  int determined_sign() const {
    if (lo.sign() > 0) return 1;
    if (hi.sign() < 0) return -1;
    return 0;
  }
  bool certainly_zero() const { return lo.is_zero() && hi.is_zero(); }

  static RatInterval hull(const RatInterval& a, const RatInterval& b) {
    return RatInterval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
  }

  friend RatInterval operator+(const RatInterval& a, const RatInterval& b) {
    return RatInterval(a.lo + b.lo, a.hi + b.hi);
  }
  friend RatInterval operator-(const RatInterval& a, const RatInterval& b) {
    return RatInterval(a.lo - b.hi, a.hi - b.lo);
  }
  friend RatInterval operator*(const RatInterval& a, const RatInterval& b);

  RatInterval pow(unsigned e) const;
  RatInterval scaled(const Rational& c) const {
    if (c.sign() >= 0) return RatInterval(lo * c, hi * c);
    return RatInterval(hi * c, lo * c);
  }
};

// Directed-rounding float interval used as a sound prefilter: every
// operation widens endpoints outward by a few ulp, so an enclosure computed
// here always contains the exact rational enclosure. Infinities are legal
// endpoints and simply mean "unbounded on that side".
struct FloatInterval {
  double lo, hi;

  FloatInterval() : lo(0), hi(0) {}
  FloatInterval(double l, double h) : lo(l), hi(h) {}

  static double down(double v) {
    if (!std::isfinite(v)) return v == INFINITY ? std::numeric_limits<double>::max() * 2 : v;
    return std::nextafter(std::nextafter(v, -INFINITY), -INFINITY);
  }
  static double up(double v) {
    if (!std::isfinite(v)) return v;
    return std::nextafter(std::nextafter(v, INFINITY), INFINITY);
  }

  static FloatInterval of(const Rational& v) {
    double d = v.to_double();
    return FloatInterval(down(d), up(d));
  }
  static FloatInterval of(const RatInterval& v) {
    return FloatInterval(down(v.lo.to_double()), up(v.hi.to_double()));
  }
  static FloatInterval point(double v) { return FloatInterval(v, v); }

  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  int determined_sign() const {
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    return 0;
  }

  friend FloatInterval operator+(const FloatInterval& a, const FloatInterval& b) {
    return FloatInterval(down(a.lo + b.lo), up(a.hi + b.hi));
  }
  friend FloatInterval operator-(const FloatInterval& a, const FloatInterval& b) {
    return FloatInterval(down(a.lo - b.hi), up(a.hi - b.lo));
  }
  friend FloatInterval operator*(const FloatInterval& a, const FloatInterval& b) {
    double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    double mn = std::min(std::min(p1, p2), std::min(p3, p4));
    double mx = std::max(std::max(p1, p2), std::max(p3, p4));
    if (std::isnan(mn) || std::isnan(mx)) return FloatInterval(-INFINITY, INFINITY);
    return FloatInterval(down(mn), up(mx));
  }

  FloatInterval pow(unsigned e) const;
  FloatInterval scaled(double c) const {
    FloatInterval r = c >= 0 ? FloatInterval(lo * c, hi * c) : FloatInterval(hi * c, lo * c);
    return FloatInterval(down(r.lo), up(r.hi));
  }
};

}  // namespace trivar
