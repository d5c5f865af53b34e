#include "interval.hpp"

namespace trivar {

RatInterval operator*(const RatInterval& a, const RatInterval& b) {
  Rational p1 = a.lo * b.lo;
  Rational p2 = a.lo * b.hi;
  Rational p3 = a.hi * b.lo;
  Rational p4 = a.hi * b.hi;
  Rational mn = std::min(std::min(p1, p2), std::min(p3, p4));
  Rational mx = std::max(std::max(p1, p2), std::max(p3, p4));
  return RatInterval(std::move(mn), std::move(mx));
}

RatInterval RatInterval::pow(unsigned e) const {
  if (e == 0) return RatInterval(Rational(1));
  if (e == 1) return *this;
  if (e % 2 == 1 || lo.sign() >= 0) {
    // Monotone case: endpoint powers bound the range.
    Rational l = lo, h = hi;
    for (unsigned i = 1; i < e; ++i) {
      l *= lo;
      h *= hi;
    }
    return RatInterval(std::move(l), std::move(h));
  }
  if (hi.sign() <= 0) {
    Rational l = hi, h = lo;
    for (unsigned i = 1; i < e; ++i) {
      l *= hi;
      h *= lo;
    }
    return RatInterval(std::move(l), std::move(h));
  }
  // Even power of a zero-straddling interval: [0, max(|lo|,|hi|)^e].
  Rational m = std::max(lo.abs(), hi.abs());
  Rational h = m;
  for (unsigned i = 1; i < e; ++i) h *= m;
  return RatInterval(Rational(0), std::move(h));
}

FloatInterval FloatInterval::pow(unsigned e) const {
  if (e == 0) return FloatInterval(1, 1);
  FloatInterval r = *this;
  for (unsigned i = 1; i < e; ++i) r = r * *this;
  return r;
}

}  // namespace trivar
