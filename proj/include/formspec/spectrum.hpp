#pragma once

#include "formspec/minima.hpp"

#include <cstdint>
#include <tuple>

namespace formspec {

// (x - r y)((x + r/2 y)^2 + (3/4 r^2 - 1)(1 + t^2) y^2), r the real root of
// x^3 - x - 1. Factored over Q(r) with |f| >= 1 attached as a hint.
RealForm neg_disc_family(const Rational& t);

// Largest root of x^3 + x^2 - 2x - 1 and its two conjugates.
struct CyclicCubic {
  std::shared_ptr<const NumberField> field;
  FieldElement rho, chi, psi;  // rho > chi > psi
};
const CyclicCubic& cyclic_cubic();

struct PosDiscFamily {
  RealForm form;
  QuadraticReal root;  // replaces rho
  Integer digit;       // the digit placed at index N+1
  Rational c;
  long N = 0;
};

// rho's digits up to N, then floor(c (rho - chi)(rho - psi) Q_N), then ones.
// The form is (x - root y)(x - chi y)(x - psi y).
PosDiscFamily pos_disc_family(const Rational& c, long N);

// theta_N: the first point left of P_N/(rho_1 Q_N) where
// |f o Delta_theta (P_N, Q_N)| reaches the target (default m(f)).
struct DiagonalInterval {
  long N = 0;
  Integer P, Q;
  Real rho1{0L};
  RatInterval right_end;  // P/(rho_1 Q)
  RatInterval theta_N;
  Rational target;
};

DiagonalInterval diagonal_interval(const BinaryForm& f, long N, std::optional<Rational> target = {});

// theta^(-n/2) f(x, theta y), the value of act(f, Delta_theta) at (x, y).
Real diagonal_value(const BinaryForm& f, const Rational& theta, const Integer& x, const Integer& y);

enum class SweepCase { Case1_convergent, Case2_deep, Case3_shallow, Case4_crossroot, Unclassified };
std::string to_string(SweepCase c);

struct SweepConfig {
  BinaryForm form = BinaryForm::descending({1, 1, -2, -1});
  long N = 15;
  long theta_samples = 200;
  long depth = 30;
  long box = 100;
  std::uint64_t seed = 7;
  Rational gap_tolerance = make_rational(1, 20);  // relative to m(f)
  unsigned threads = 0;
  void validate() const;
};

struct SweepPoint {
  Rational theta;
  MinResult min_result;
  SweepCase kind = SweepCase::Unclassified;
  RatInterval spec_value;
};

struct SweepSummary {
  DiagonalInterval interval;
  long samples = 0;
  std::array<long, 5> counts{};
  double case1_fraction = 0;
  std::vector<RatInterval> case1_values;  // sorted by midpoint
  Rational max_gap;            // between consecutive case-1 values
  Rational max_gap_with_ends;  // also counting 0 and m(f)
  Rational covered;            // sum of consecutive gaps below tolerance
  double M_hat = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  SweepSummary summary;
};

SweepResult sweep(const SweepConfig& cfg);
// theta_lo, theta_hi, value_lo, value_hi, case, x, y
std::string sweep_csv(const SweepResult& r, int digits = 20);

struct SigmaResult {
  Transform transform = Transform::identity();
  Rational lambda{1}, mu{0};  // T = M diag-shear(lambda, mu) M^-1, M = [[rho_1, -1], [1, 0]]
  RatInterval residual;       // prod_{i>=2} (P_N/Q_N - theta T(rho_i)) - u
  RatInterval distance;       // max entrywise |T - I|
  bool identity = false;
  long iterations = 0;
};

// Transform fixing rho_1 with prod_{i>=2}(P_N/Q_N - theta T(rho_i)) = u.
// f must be totally real.
SigmaResult sigma_solve(const BinaryForm& f, long N, const Rational& theta, const Real& u,
                        const Rational& guard = make_rational(1, 10), double tolerance = 1e-12);

// prod_{i>=2} (P_N/Q_N - theta rho_i), the identity's value.
Real sigma_center(const BinaryForm& f, long N, const Rational& theta);

using TransformPath = std::function<Transform(const Rational&)>;

struct ProfilePoint {
  Rational t;
  MinResult min;
  // min of q^n |z - p/q| over transported roots z and convergents with
  // q <= qmax; small exactly when some |f(p, q)| is
  double nearest = 0;
  Integer p, q;
  bool near_rational = false;
};

std::vector<ProfilePoint> path_profile(const BinaryForm& f, const TransformPath& path, long samples,
                                       const MinOptions& opt = {}, double threshold = 0.1, long qmax = 1000,
                                       unsigned threads = 0);

// Delta_theta(t) with theta(t) = 1 + 4 (peak - 1) t (1 - t).
TransformPath diagonal_path(const Rational& peak);

struct MarkoffTriple {
  Integer x, y, z;
  friend bool operator<(const MarkoffTriple& a, const MarkoffTriple& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
  }
  friend bool operator==(const MarkoffTriple&, const MarkoffTriple&) = default;
};

struct MarkoffEntry {
  MarkoffTriple triple;
  QuadraticReal value;  // z / sqrt(9 z^2 - 4)
  RatInterval enclosure;
};

// Ordered by z, then x; so values descend.
std::vector<MarkoffEntry> markoff_triples(const Integer& bound);

struct FreimanConstant {
  QuadraticReal value;
  RatInterval enclosure;
};
FreimanConstant freiman_constant(long bits = 128);

}  // namespace formspec
