#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace gyni {

/// Exact arbitrary-precision rational number.
///
/// Always held in lowest terms with a positive denominator; every arithmetic
/// operation is exact. Thin value wrapper over GMP's mpq_class that fixes the
/// canonical form on construction and keeps gmpxx expression templates out of
/// client code.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}                 // NOLINT: implicit by design
  Rational(long n) : v_(n) {}                // NOLINT: implicit by design
  Rational(long num, long den);
  explicit Rational(const mpz_class& num, const mpz_class& den = 1);

  /// Parses "num/den" or "num" (optional leading '-'). Throws ParseError on
  /// malformed input or a zero denominator.
  static Rational parse(std::string_view s);

  /// Canonical serialization: "num/den" in lowest terms, denominator always
  /// written ("0/1" for zero).
  std::string str() const;

  /// Decimal rendering with the given number of fractional digits (round to
  /// nearest, ties away from zero). Display only; never used in computation.
  std::string decimal(int digits = 12) const;

  const mpz_class numerator() const { return v_.get_num(); }
  const mpz_class denominator() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  Rational abs() const;
  double to_double() const { return v_.get_d(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(Rational a) { a.v_ = -a.v_; return a; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) >= 0; }

  /// acc -= a * b, using `scratch` for the intermediate product. Avoids
  /// temporary allocations in elimination and pivot inner loops.
  static void submul(Rational& acc, const Rational& a, const Rational& b, Rational& scratch) {
    mpq_mul(scratch.v_.get_mpq_t(), a.v_.get_mpq_t(), b.v_.get_mpq_t());
    mpq_sub(acc.v_.get_mpq_t(), acc.v_.get_mpq_t(), scratch.v_.get_mpq_t());
  }

  /// acc += a * b, using `scratch` for the intermediate product.
  static void addmul(Rational& acc, const Rational& a, const Rational& b, Rational& scratch) {
    mpq_mul(scratch.v_.get_mpq_t(), a.v_.get_mpq_t(), b.v_.get_mpq_t());
    mpq_add(acc.v_.get_mpq_t(), acc.v_.get_mpq_t(), scratch.v_.get_mpq_t());
  }

 private:
  explicit Rational(mpq_class v) : v_(std::move(v)) {}
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace gyni
