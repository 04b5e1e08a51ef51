#pragma once

#include "formspec/algebraic.hpp"

namespace formspec {

// (p + q sqrt(d)) / r with r > 0, gcd(p, q, r) = 1 and d squarefree, d > 1.
// q = 0 encodes a rational value (d is then kept as 1 unless inherited).
class QuadraticReal {
 public:
  QuadraticReal() : p_(0), q_(0), d_(1), r_(1) {}
  QuadraticReal(const Rational& v);
  // Extracts square factors from d and canonicalizes.
  QuadraticReal(Integer p, Integer q, Integer d, Integer r);

  const Integer& p() const { return p_; }
  const Integer& q() const { return q_; }
  const Integer& d() const { return d_; }
  const Integer& r() const { return r_; }
  bool is_rational() const { return q_ == 0; }
  Rational rational_value() const;

  int sign() const;
  Integer floor() const;
  // Enclosure of width <= 2^-bits.
  RatInterval enclose(long bits) const;
  double approx() const;

  QuadraticReal operator-() const;
  friend QuadraticReal operator+(const QuadraticReal& a, const QuadraticReal& b);
  friend QuadraticReal operator-(const QuadraticReal& a, const QuadraticReal& b);
  friend QuadraticReal operator*(const QuadraticReal& a, const QuadraticReal& b);
  friend QuadraticReal operator/(const QuadraticReal& a, const QuadraticReal& b);
  friend bool operator==(const QuadraticReal&, const QuadraticReal&) = default;

  // (a x + b) / (c x + d) for an integer matrix.
  QuadraticReal mobius(const Integer& a, const Integer& b, const Integer& c, const Integer& d) const;

  std::string to_string() const;

 private:
  void canonicalize();
  Integer p_, q_, d_, r_;
};

Ordering compare(const QuadraticReal& a, const QuadraticReal& b);
Ordering compare(const QuadraticReal& a, const Rational& b);
AlgebraicReal quadratic_to_algebraic(const QuadraticReal& v);

// Writes n = s^2 m with m squarefree (trial division; see README for limits).
void split_square(const Integer& n, Integer& s, Integer& m);

}  // namespace formspec
