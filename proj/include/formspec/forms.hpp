#pragma once

#include "formspec/real.hpp"

#include <array>
#include <functional>
#include <optional>

namespace formspec {

// sum c_i x^i y^(n-i) with exact rational coefficients; coeffs()[i] = c_i.
class BinaryForm {
 public:
  explicit BinaryForm(std::vector<Rational> coeffs);
  // "n: c_n ... c_0", e.g. "3: 1 1 -2 -1" for x^3 + x^2 y - 2 x y^2 - y^3.
  static BinaryForm parse(const std::string& text);
  // Highest power of x first, like the text format.
  static BinaryForm descending(std::initializer_list<long> c);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& coeff(int i) const { return c_[i]; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational eval(const Rational& x, const Rational& y) const;
  // f(z, 1) scaled to a primitive integer polynomial.
  IntPolynomial dehomogenized() const;
  // Least L > 0 with L*f integral.
  Integer denominator_lcm() const;
  bool is_integral() const { return denominator_lcm() == 1; }
  BinaryForm scaled(const Rational& k) const;
  std::string to_text() const;
  friend bool operator==(const BinaryForm&, const BinaryForm&) = default;

 private:
  std::vector<Rational> c_;
};

// Discriminant by the resultant of f(z,1) and its derivative, normalized by
// (-1)^(n(n-1)/2)/c_n. A vanishing c_n is handled by swapping x and y, or by a
// shear when both c_n and c_0 vanish.
Rational discriminant(const BinaryForm& f);
// b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2 + 18abcd for ax^3 + bx^2y + cxy^2 + dy^3.
Rational cubic_discriminant(const BinaryForm& f);

// 2x2 matrix [[a, b], [c, d]] acting on forms by f -> f o T^-1, so roots move
// forward by z -> (az + b)/(cz + d). Det is 1, or -1 when built with allow_gl.
// diagonal(theta) is diag(sqrt(theta), 1/sqrt(theta)) with theta kept exact.
class Transform {
 public:
  static Transform identity();
  static Transform rational(const Rational& a, const Rational& b, const Rational& c, const Rational& d,
                            bool allow_gl = false);
  static Transform real(Real a, Real b, Real c, Real d, bool allow_gl = false);
  static Transform diagonal(const Rational& theta);

  const Real& a() const { return e_[0]; }
  const Real& b() const { return e_[1]; }
  const Real& c() const { return e_[2]; }
  const Real& d() const { return e_[3]; }
  int det_sign() const { return det_; }
  bool is_rational() const;
  std::array<Rational, 4> rational_entries() const;
  const std::optional<Rational>& theta() const { return theta_; }

  Real apply(const Real& z) const;
  Transform operator*(const Transform& o) const;
  Transform inverse() const;
  // Max entrywise |T - I|, as an enclosure.
  RatInterval distance_to_identity(long bits = 64) const;
  std::string to_string() const;

 private:
  Transform() = default;
  std::array<Real, 4> e_;
  int det_ = 1;
  std::optional<Rational> theta_;
};

// f o T^-1 for rational T; throws for irrational T (use RealForm).
BinaryForm act(const BinaryForm& f, const Transform& T);

struct RootProfile {
  std::vector<AlgebraicReal> real_roots;  // descending
  int real_count = 0;
  int degree = 0;
};

// Roots of f(z,1); throws PreconditionError on a repeated root.
RootProfile real_roots(const BinaryForm& f);

// m / |D|^(1/(2n-2)) with width about 2^-bits.
RatInterval normalized_minimum(const BinaryForm& f, const Rational& m, long bits = 64);
RatInterval normalized_minimum(const RatInterval& disc, int degree, const RatInterval& m, long bits = 64);

// Proven lower bounds that a constructor can attach to a form; the minimizer
// uses them when nothing generic applies.
struct FormHints {
  // |f| >= global_lower on Z^2 \ 0.
  std::optional<Rational> global_lower;
  // For the real root with the given index (descending order) and a
  // neighbourhood of z = x/y around it, a lower bound of |f(x, y)| over every
  // primitive (x, y) with x/y in the neighbourhood.
  std::function<std::optional<Rational>(std::size_t root, const RatInterval& region)> near_root_lower;
  std::string note;
};

// Binary form with real coefficients. Three representations, any of which
// may be present:
//   exact  outer * g with g rational (Delta_theta images keep this shape)
//   factored  outer * scale * prod (x - r_i y) * prod (x^2 + p_j x y + q_j y^2)
//   expanded  coefficient list
class RealForm {
 public:
  explicit RealForm(const BinaryForm& f);
  RealForm(Real outer, const BinaryForm& inner);
  static RealForm factored(Real scale, std::vector<Real> roots, std::vector<std::pair<Real, Real>> quads);
  static RealForm expanded(std::vector<Real> coeffs);

  int degree() const { return n_; }
  const Real& outer() const { return outer_; }
  const std::optional<BinaryForm>& inner() const { return inner_; }
  bool is_factored() const { return factored_; }
  const Real& scale() const { return scale_; }
  const std::vector<Real>& linear_roots() const { return roots_; }
  const std::vector<std::pair<Real, Real>>& quad_factors() const { return quads_; }

  // The rational form when every coefficient is rational.
  std::optional<BinaryForm> exact() const;
  const std::vector<Real>& coefficients() const { return coeffs_; }

  Real value(const Integer& x, const Integer& y) const;
  int sign_at(const Integer& x, const Integer& y) const;

  // Real roots of f(z,1) in descending order.
  std::vector<Real> real_roots() const;
  int real_count() const { return static_cast<int>(real_roots().size()); }
  Real discriminant() const;

  RealForm act(const Transform& T) const;
  RealForm scaled(const Real& k) const;

  const FormHints& hints() const { return hints_; }
  RealForm with_hints(FormHints h) const;
  std::string to_string() const;

 private:
  RealForm() = default;
  void expand_coefficients();
  int n_ = 0;
  Real outer_{1L};
  std::optional<BinaryForm> inner_;
  bool factored_ = false;
  Real scale_{1L};
  std::vector<Real> roots_;
  std::vector<std::pair<Real, Real>> quads_;
  std::vector<Real> coeffs_;
  FormHints hints_;
};

// reals: linear factors (x - r y); quads: positive definite A x^2 + B x y + C y^2.
RealForm from_roots(const std::vector<Real>& reals, const std::vector<std::array<Real, 3>>& quads,
                    const Rational& scale);

// Root of a rational form as an exact quadratic when its minimal polynomial
// has degree 2, otherwise as an algebraic leaf.
Real root_as_real(const AlgebraicReal& r);

}  // namespace formspec
