#pragma once

#include "formspec/minima.hpp"

#include <cstdint>

namespace formspec {

// Search ran out of iterations; what() carries the trace summary.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DiophParams {
  Rational epsilon = make_rational(1, 4);
  Rational eta = make_rational(1, 2);
  Rational tau1 = make_rational(1, 10);
  Rational tau2 = make_rational(1, 100);
  Integer height = 10000;  // E^eta checks cover denominators up to this
  long depth = 30;         // convergent depth for m(rho) comparisons
  void validate() const;
};

// For every (X, Y), 1 <= Y <= H, with |X/Y - x| < Y^-(2+eta) also
// |X/Y - rho| < 2 Y^-(2+eta). Only convergents of x and their multiples can
// satisfy the premise once Y^eta > 2; smaller Y are scanned directly.
bool in_E_eta(const Real& x, const Real& rho, const Rational& eta, const Integer& H);

// m(x) > (1 - eps) m(rho) with both sides restricted to convergents up to
// `depth`; everything belongs when m(rho) = 0.
bool in_B_eps(const Real& x, const Real& rho, const Rational& eps, int n, long depth);

struct SWindow {
  Integer lo, hi;  // admissible digits at index N
};

// Digit window at index N for rho: [h, min((1-eps)^-1 (Q_{N-1}^(n-2)/m + 1) - 1, (1+eps) a_N)].
// a_N is replaced by alpha_N and m by an upper estimate, so the window only
// shrinks.
SWindow s_window(const Real& rho, const Rational& eps, long N, const Integer& h, int n, long depth = 0);

// rho's digits up to N-1, digit h at N, then all ones. Throws
// PreconditionError naming both window ends when h is outside the window.
QuadraticReal construct_S_point(const Real& rho, const Rational& eps, long N, const Integer& h, const Rational& eta,
                                int n, long depth = 0);

// Fraction of sampled x in the cylinder [a0; prefix] with
// alpha_{N+i+1}(x) < Q_{N+i}(x)^eta for every checked i. Samples are dyadic
// points of the cylinder; digits are trusted while Q_{N+i}^2 <= 2^50 Q_N^2,
// and at most max_checks indices are examined.
Rational cutting_density_estimate(const Integer& a0, const std::vector<Integer>& prefix, const Rational& eta,
                                  long samples, std::uint64_t seed, long max_checks = 64);

struct ClassifiedInterval {
  enum class Kind { TypeI, TypeII };
  RatInterval interval;
  Kind kind = Kind::TypeI;
  std::optional<RatInterval> subinterval;
  Rational density_estimate;
  long sample_count = 0;
  long n0 = 0;             // first index where the digit map is not constant
  long digit_values = 0;   // size of the digit image at n0; -1 when unbounded
  std::optional<Rational> C;  // lambda(I') / (tau1 eps lambda(I))
  std::string note;
};

ClassifiedInterval structural_classify(const Real& rho, const RatInterval& iv, const DiophParams& params, int n,
                                       long samples, std::uint64_t seed);

struct AelWitness {
  Transform transform = Transform::identity();
  Rational shift;  // transform is x -> x + shift
  Rational epsilon;
  std::vector<RatInterval> per_root_lower_bounds;  // m(rho_i + shift) enclosures
  std::vector<ClassifiedInterval> interval_trace;
  MinResult minimum;  // of act(f, transform)
  long iterations = 0;
};

// Does T make act(f, T) an eps-almost extremal witness: every transported
// root in B_eps and E^eta of the original and the minimum at least
// (1 - eps) m(f).
bool is_ael_witness(const BinaryForm& f, const Transform& T, const DiophParams& params, AelWitness* out = nullptr);

AelWitness ael_search(const BinaryForm& f, const Rational& eps, const DiophParams& params, std::uint64_t seed,
                      long budget = 10000);

}  // namespace formspec
