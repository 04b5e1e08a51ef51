#include "formspec/rational.hpp"

#include <cmath>

namespace formspec {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(long num, long den) { return make_rational(Integer(num), Integer(den)); }

Integer parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw PreconditionError("empty integer");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw PreconditionError("malformed integer '" + s + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9') throw PreconditionError("malformed integer '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s);
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (auto slash = s.find('/'); slash != std::string::npos)
    return make_rational(parse_integer(s.substr(0, slash)), parse_integer(s.substr(slash + 1)));
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    std::string digits = whole + frac;
    if (digits == "-" || digits.empty() || frac.empty()) throw PreconditionError("malformed decimal '" + s + "'");
    Integer num = parse_integer(digits);
    Integer den = ipow(Integer(10), frac.size());
    if (neg && num > 0) num = -num;  // handles "-0.5"
    return make_rational(num, den);
  }
  return Rational(parse_integer(s));
}

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational abs_of(const Rational& q) { return q < 0 ? Rational(-q) : q; }
int sign_of(const Rational& q) { return sgn(q); }
int sign_of(const Integer& z) { return sgn(z); }

Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational rpow(const Rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw PreconditionError("zero to a negative power");
    Rational inv = 1 / base;
    return rpow(inv, -e);
  }
  Rational r(ipow(base.get_num(), static_cast<unsigned long>(e)), ipow(base.get_den(), static_cast<unsigned long>(e)));
  return r;  // already canonical
}

Integer isqrt(const Integer& n) {
  if (n < 0) throw PreconditionError("isqrt of a negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Integer& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

long bit_length(const Integer& z) {
  if (z == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal(const Rational& q, int digits) {
  Integer scale = ipow(Integer(10), static_cast<unsigned long>(digits));
  Rational a = abs_of(q) * scale;
  Integer t = floor_of(a);
  std::string s = t.get_str();
  if (static_cast<int>(s.size()) <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
  std::string out = s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  if (q < 0) out = "-" + out;
  return out;
}

double to_double(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

}  // namespace formspec
