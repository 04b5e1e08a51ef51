#pragma once

#include "formspec/field.hpp"
#include "formspec/quadratic.hpp"

#include <memory>
#include <optional>

namespace formspec {

// Exact real number: a leaf (rational, algebraic, quadratic, number-field
// element) or an arithmetic expression over leaves. Every value can be
// enclosed to any width; signs of leaves are decided exactly, signs of
// expressions by refinement up to a precision cap.
class Real {
 public:
  enum class Kind { rational, algebraic, quadratic, field, sum, product, quotient, negation, sqrt };
  struct Node;

  Real();
  Real(const Rational& q);
  Real(long v);
  Real(const AlgebraicReal& a);
  Real(const QuadraticReal& q);
  Real(const FieldElement& f);

  Kind kind() const;
  // Width <= 2^-bits.
  RatInterval enclose(long bits) const;
  // Throws UnresolvedError when an expression cannot be separated from zero
  // below 2^-max_bits.
  int sign(long max_bits = 1L << 14) const;
  std::optional<Rational> exact_rational() const;
  const AlgebraicReal* algebraic() const;
  const QuadraticReal* quadratic() const;
  const FieldElement* field_element() const;
  double approx() const;
  std::string to_string() const;

  Real operator-() const;
  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real sqrt(const Real& a);
  Real& operator+=(const Real& b) { return *this = *this + b; }
  Real& operator-=(const Real& b) { return *this = *this - b; }
  Real& operator*=(const Real& b) { return *this = *this * b; }

 private:
  explicit Real(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

Real abs(const Real& a);
Real pow(const Real& a, unsigned e);
Ordering compare(const Real& a, const Real& b, long max_bits = 1L << 14);
// Enclosure of |value| with relative width <= 2^-rel_bits (value must be nonzero).
RatInterval enclose_relative(const Real& a, long rel_bits);
// Exact floor; integer-valued expressions need an exact sign (throws UnresolvedError otherwise).
Integer floor(const Real& a);

}  // namespace formspec
