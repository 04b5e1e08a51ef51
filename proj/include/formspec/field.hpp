#pragma once

#include "formspec/algebraic.hpp"

#include <memory>
#include <mutex>

namespace formspec {

// Q(alpha) for a real root alpha of an irreducible integer polynomial, with
// the real embedding fixed by alpha's isolating interval.
class NumberField {
 public:
  // Irreducibility is checked for degree <= 3 (no rational root); higher
  // degrees are trusted.
  explicit NumberField(const AlgebraicReal& alpha);

  const IntPolynomial& modulus() const { return alpha_.minpoly(); }
  int degree() const { return alpha_.degree(); }
  const AlgebraicReal& generator() const { return alpha_; }
  // alpha refined to width <= 2^-bits, memoized.
  RatInterval alpha_enclosure(long bits) const;

 private:
  AlgebraicReal alpha_;
  mutable std::mutex mu_;
  mutable AlgebraicReal best_;
};

// Element sum c_i alpha^i with deg < [K:Q].
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(std::shared_ptr<const NumberField> k, const Rational& v);
  FieldElement(std::shared_ptr<const NumberField> k, std::vector<Rational> coeffs);
  static FieldElement generator(std::shared_ptr<const NumberField> k);

  const std::shared_ptr<const NumberField>& field() const { return k_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  bool is_rational() const { return c_.size() <= 1; }
  Rational rational_value() const;

  // Exact: nonzero elements of a field have nonzero embedding.
  int sign() const;
  RatInterval enclose(long bits) const;

  FieldElement operator-() const;
  // Multiplicative inverse by solving the multiplication-matrix system.
  FieldElement inverse() const;
  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const Rational& a, const FieldElement& b);
  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.c_ == b.c_; }

  std::string to_string() const;

 private:
  void reduce();
  std::shared_ptr<const NumberField> k_;
  std::vector<Rational> c_;
};

}  // namespace formspec
