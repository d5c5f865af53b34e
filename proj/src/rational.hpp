#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trivar {

// Error taxonomy shared by the whole library. `code` maps onto the C API
// status values and the CLI exit codes.
struct Error : std::runtime_error {
  enum class Code { invalid_input, domain, budget, internal };
  Code code;
  Error(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline Error input_error(const std::string& msg) { return Error(Error::Code::invalid_input, msg); }
inline Error domain_error(const std::string& msg) { return Error(Error::Code::domain, msg); }
inline Error budget_error(const std::string& msg) { return Error(Error::Code::budget, msg); }
inline Error internal_error(const std::string& msg) { return Error(Error::Code::internal, msg); }

// Exact rational, always canonical: gcd(num, den) == 1 and den > 0.
// Carries a provenance taint bit: values derived from instance coordinates
// stay tainted through arithmetic, which is what decides whether a sign
// test is chargeable to the decision-tree ledger.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long v) : num_(v), den_(1) {}        // NOLINT: implicit by design
  Rational(int v) : num_(v), den_(1) {}         // NOLINT
  Rational(mpz_class n) : num_(std::move(n)), den_(1) {}
  Rational(mpz_class n, mpz_class d);

  // Accepts "p", "-p", "p/q" with arbitrary-precision parts.
  static Rational from_string(const std::string& s);

  const mpz_class& num() const { return num_; }
  const mpz_class& den() const { return den_; }

  bool tainted() const { return tainted_; }
  Rational& mark_tainted() { tainted_ = true; return *this; }
  Rational with_taint() const { Rational r = *this; r.tainted_ = true; return r; }

  int sign() const { return sgn(num_); }
  bool is_zero() const { return sgn(num_) == 0; }
  bool is_integer() const { return den_ == 1; }

  // Three-way exact comparison; taint plays no role here.
  static int cmp(const Rational& a, const Rational& b);

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a, b) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a, b) >= 0; }

  Rational abs() const;
  Rational inverse() const;  // throws domain on zero

  // Midpoint helper used pervasively by bisection loops.
  static Rational mid(const Rational& a, const Rational& b);

  std::string to_string() const;  // canonical "p" or "p/q"

  // Nearest double (round-to-nearest via GMP); may overflow to +-inf.
  double to_double() const;

  // Order-preserving structural hash (equal rationals hash equal).
  uint64_t hash() const;

 private:
  void canonicalize();
  mpz_class num_;
  mpz_class den_;
  bool tainted_ = false;
};

// FNV-1a style mixing used for ledger identities and digests.
inline uint64_t hash_mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

uint64_t hash_bytes(const void* data, size_t n, uint64_t seed = 0xcbf29ce484222325ULL);
uint64_t hash_mpz(const mpz_class& z);

}  // namespace trivar
