#include "gyni/rational.hpp"

#include <cctype>
#include <ostream>

#include "gyni/error.hpp"

namespace gyni {

Rational::Rational(long num, long den) {
  if (den == 0) throw ParseError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw ParseError("rational with zero denominator");
  v_ = mpq_class(num) / mpq_class(den);
}

Rational Rational::parse(std::string_view s) {
  auto is_int = [](std::string_view t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-') ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  std::string text(s);
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = (slash == std::string::npos) ? "1" : text.substr(slash + 1);
  // Only the numerator may carry a sign; the canonical form keeps the
  // denominator positive.
  if (!is_int(num) || !is_int(den) || den.find('-') != std::string::npos)
    throw ParseError("malformed rational: '" + text + "'");
  mpq_class v(num + "/" + den);
  if (v.get_den() == 0) throw ParseError("rational with zero denominator: '" + text + "'");
  v.canonicalize();
  Rational r;
  r.v_ = std::move(v);
  return r;
}

std::string Rational::str() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::decimal(int digits) const {
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  mpz_class num = v_.get_num() * scale * 2;
  mpz_class q = num / v_.get_den();
  // Round half away from zero.
  if (q >= 0)
    q = (q + 1) / 2;
  else
    q = (q - 1) / 2;
  bool neg = q < 0;
  mpz_class aq = ::abs(q);
  std::string s = aq.get_str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
  }
  if (neg) s.insert(0, "-");
  return s;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::abs() const {
  Rational r = *this;
  if (r.sign() < 0) r = -r;
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace gyni
