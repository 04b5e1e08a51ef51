#pragma once

#include "formspec/polynomial.hpp"

#include <optional>

namespace formspec {

enum class Ordering { less, equal, greater };

// A real root of a squarefree integer polynomial, identified by an isolating
// interval. Irrational roots keep lo < hi with p(lo) p(hi) < 0 and exactly one
// root inside; rational roots are stored exactly (lo == hi, linear minpoly).
class AlgebraicReal {
 public:
  AlgebraicReal() : AlgebraicReal(Rational(0)) {}
  explicit AlgebraicReal(const Rational& value);
  // Validates the invariants; interval (lo, hi] must hold exactly one root.
  AlgebraicReal(IntPolynomial minpoly, const Rational& lo, const Rational& hi);

  const IntPolynomial& minpoly() const { return p_; }
  RatInterval interval() const { return {lo_, hi_}; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  bool is_rational() const { return lo_ == hi_; }
  const Rational& rational_value() const;
  int degree() const { return p_.degree(); }

  // Same root, isolating width <= width.
  AlgebraicReal refine(const Rational& width) const;
  // Same root, width <= 2^-bits.
  AlgebraicReal refine_bits(long bits) const;
  Integer floor() const;
  double approx() const;

 private:
  struct Unchecked {};
  AlgebraicReal(Unchecked, IntPolynomial p, Rational lo, Rational hi) : p_(std::move(p)), lo_(std::move(lo)), hi_(std::move(hi)) {}
  friend std::vector<AlgebraicReal> isolate_real_roots(const IntPolynomial& p);
  friend AlgebraicReal cf_step(const AlgebraicReal& x, const Integer& a);

  IntPolynomial p_;
  Rational lo_, hi_;
};

int sturm_root_count(const IntPolynomial& p, const RatInterval& iv);
// Ascending. Rational roots come back exact; the other roots then carry the
// polynomial with those linear factors removed.
std::vector<AlgebraicReal> isolate_real_roots(const IntPolynomial& p);
// Fraction with the smallest denominator in [lo, hi].
Rational simplest_in(const Rational& lo, const Rational& hi);
AlgebraicReal refine(const AlgebraicReal& a, const Rational& width);
Ordering compare(const AlgebraicReal& a, const Rational& q);
// Exact comparison of two algebraic reals (equal only when they are the same number).
Ordering compare(const AlgebraicReal& a, const AlgebraicReal& b);
// x + q and x * q, kept algebraic.
AlgebraicReal shifted(const AlgebraicReal& x, const Rational& q);
AlgebraicReal scaled(const AlgebraicReal& x, const Rational& q);
// The value 1/(x - a) as an algebraic real, for x > a.
AlgebraicReal cf_step(const AlgebraicReal& x, const Integer& a);

std::string to_string(const AlgebraicReal& a);

}  // namespace formspec
