#pragma once

#include "formspec/interval.hpp"

#include <initializer_list>
#include <vector>

namespace formspec {

// Univariate polynomial with big-integer coefficients, coefficient i is the
// coefficient of x^i. Leading zeros are stripped; the empty list is zero.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> coeffs);
  IntPolynomial(std::initializer_list<long> coeffs);
  // Clears denominators of rational coefficients (result is a positive multiple).
  static IntPolynomial from_rationals(const std::vector<Rational>& coeffs);
  // Parses "c_n ... c_0" (highest degree first), the CLI convention.
  static IntPolynomial parse_descending(const std::string& text);

  const std::vector<Integer>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Integer& lead() const { return c_.back(); }
  Integer coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : Integer(0); }

  Rational eval(const Rational& x) const;
  // Exact sign of p(x); cheaper than eval for sign-only decisions.
  int sign_at(const Rational& x) const;
  RatInterval eval(const RatInterval& x) const;

  IntPolynomial derivative() const;
  Integer content() const;
  // Divides by the content and makes the leading coefficient positive.
  IntPolynomial primitive() const;
  // p(x + k)
  IntPolynomial shift(const Integer& k) const;
  // x^deg p(1/x)
  IntPolynomial reverse() const;
  // p(-x)
  IntPolynomial negate_var() const;

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const Integer& k, const IntPolynomial& a);
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  std::string to_string() const;

 private:
  void trim();
  std::vector<Integer> c_;
};

// Primitive pseudo-remainder of a by b: a positive multiple of the remainder
// of a modulo b over Q, divided by its content.
IntPolynomial prem_primitive(const IntPolynomial& a, const IntPolynomial& b);
// Primitive gcd over Q[x] (leading coefficient positive); zero iff both zero.
IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b);
// Exact quotient over Z when b divides a over Q; throws otherwise.
IntPolynomial exact_div(const IntPolynomial& a, const IntPolynomial& b);
bool is_squarefree(const IntPolynomial& p);
IntPolynomial squarefree_part(const IntPolynomial& p);

// Sturm chain for a squarefree polynomial.
class SturmSequence {
 public:
  explicit SturmSequence(const IntPolynomial& p);
  // Number of distinct real roots in (lo, hi].
  int count(const Rational& lo, const Rational& hi) const;
  int variations(const Rational& x) const;
  const std::vector<IntPolynomial>& chain() const { return chain_; }

 private:
  std::vector<IntPolynomial> chain_;
};

// Cauchy-type bound: every real root lies strictly inside (-B, B), B a power of two.
Rational root_bound(const IntPolynomial& p);

}  // namespace formspec
