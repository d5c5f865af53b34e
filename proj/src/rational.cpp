#include "rational.hpp"

#include <cmath>

namespace trivar {

Rational::Rational(mpz_class n, mpz_class d) : num_(std::move(n)), den_(std::move(d)) {
  if (sgn(den_) == 0) throw domain_error("rational with zero denominator");
  canonicalize();
}

void Rational::canonicalize() {
  if (sgn(den_) < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (sgn(num_) == 0) {
    den_ = 1;
    return;
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
  if (g != 1) {
    mpz_divexact(num_.get_mpz_t(), num_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }
}

Rational Rational::from_string(const std::string& s) {
  if (s.empty()) throw input_error("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(mpz_class(s));
    mpz_class n(s.substr(0, slash));
    mpz_class d(s.substr(slash + 1));
    return Rational(std::move(n), std::move(d));
  } catch (const std::invalid_argument&) {
    throw input_error("malformed rational literal: " + s);
  }
}

int Rational::cmp(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return ::cmp(a.num_, b.num_);
  int sa = sgn(a.num_), sb = sgn(b.num_);
  if (sa != sb) return sa < sb ? -1 : 1;
  // Same sign: compare cross products. Denominators are positive.
  static thread_local mpz_class l, r;
  mpz_mul(l.get_mpz_t(), a.num_.get_mpz_t(), b.den_.get_mpz_t());
  mpz_mul(r.get_mpz_t(), b.num_.get_mpz_t(), a.den_.get_mpz_t());
  return ::cmp(l, r);
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (den_ == o.den_) {
    num_ += o.num_;
    if (den_ != 1) canonicalize();
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    canonicalize();
  }
  tainted_ = tainted_ || o.tainted_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  if (den_ == o.den_) {
    num_ -= o.num_;
    if (den_ != 1) canonicalize();
  } else {
    num_ = num_ * o.den_ - o.num_ * den_;
    den_ *= o.den_;
    canonicalize();
  }
  tainted_ = tainted_ || o.tainted_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  num_ *= o.num_;
  den_ *= o.den_;
  canonicalize();
  tainted_ = tainted_ || o.tainted_;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw domain_error("division by zero rational");
  num_ *= o.den_;
  den_ *= o.num_;
  canonicalize();
  tainted_ = tainted_ || o.tainted_;
  return *this;
}

Rational Rational::abs() const {
  Rational r = *this;
  if (sgn(r.num_) < 0) r.num_ = -r.num_;
  return r;
}

Rational Rational::inverse() const {
  if (is_zero()) throw domain_error("inverse of zero");
  Rational r;
  r.num_ = den_;
  r.den_ = num_;
  r.tainted_ = tainted_;
  if (sgn(r.den_) < 0) {
    r.num_ = -r.num_;
    r.den_ = -r.den_;
  }
  return r;
}

Rational Rational::mid(const Rational& a, const Rational& b) {
  Rational r = a + b;
  r /= Rational(2);
  return r;
}

std::string Rational::to_string() const {
  if (den_ == 1) return num_.get_str();
  return num_.get_str() + "/" + den_.get_str();
}

double Rational::to_double() const {
  mpq_class q(num_, den_);
  return q.get_d();
}

uint64_t hash_bytes(const void* data, size_t n, uint64_t seed) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t hash_mpz(const mpz_class& z) {
  size_t count = 0;
  int s = sgn(z);
  if (s == 0) return 0x9ae16a3b2f90404fULL;
  // Export absolute-value limbs as 8-byte words, host order.
  size_t words = (mpz_sizeinbase(z.get_mpz_t(), 2) + 63) / 64;
  std::string buf(words * 8, '\0');
  mpz_export(buf.data(), &count, -1, 8, 0, 0, z.get_mpz_t());
  uint64_t h = hash_bytes(buf.data(), count * 8);
  return hash_mix(h, s < 0 ? 0x5bf03635ULL : 0x279926ULL);
}

uint64_t Rational::hash() const {
  return hash_mix(hash_mpz(num_), hash_mpz(den_));
}

}  // namespace trivar
