#pragma once

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace formspec {

using Integer = mpz_class;
using Rational = mpq_class;

// Thrown when an operation's documented precondition does not hold.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when an exact sign decision could not be resolved within the
// precision cap (the quantity is zero or extraordinarily close to it).
struct UnresolvedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long num, long den = 1);

// Accepts "p", "p/q" and plain decimals such as "-1.25".
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);
Rational abs_of(const Rational& q);
int sign_of(const Rational& q);
int sign_of(const Integer& z);

Integer ipow(const Integer& base, unsigned long e);
Rational rpow(const Rational& base, long e);

// floor(sqrt(n)) for n >= 0.
Integer isqrt(const Integer& n);
bool is_square(const Integer& n);

// Bit length of |z| (0 for z = 0).
long bit_length(const Integer& z);

std::string to_string(const Integer& z);
std::string to_string(const Rational& q);
// Decimal rendering truncated toward zero, for display only.
std::string to_decimal(const Rational& q, int digits);
double to_double(const Rational& q);

inline std::strong_ordering cmp(const Rational& a, const Rational& b) {
  int c = ::cmp(a, b);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}  // namespace formspec
