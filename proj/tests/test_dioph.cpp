#include <gtest/gtest.h>

#include <cmath>

#include "formspec/dioph.hpp"
#include "formspec/sampling.hpp"
#include "support.hpp"

using namespace formspec;

namespace {

const BinaryForm kMordellNeg = BinaryForm::descending({1, 0, -1, -1});
const BinaryForm kMordellPos = BinaryForm::descending({1, 1, -2, -1});

Real golden() { return Real(QuadraticReal(Integer(1), Integer(1), Integer(5), Integer(2))); }
Real rho49() { return Real(isolate_real_roots(IntPolynomial({-1, -2, 1, 1})).back()); }

QuadraticReal random_quadratic(testutil::Rng& rng, const std::vector<Integer>& prefix) {
  std::vector<Integer> digits = prefix, block;
  for (int i = 0; i < 6; ++i) digits.emplace_back(rng.uniform(1, 12));
  for (int i = 0; i < 2; ++i) block.emplace_back(rng.uniform(1, 5));
  return assemble(Integer(rng.uniform(-2, 2)), digits, block);
}

// Direct scan of every Y <= H in long double. Returns -1 when some comparison
// is too close to call in floating point.
int scan_E(long double x, long double rho, double eta, long H) {
  for (long Y = 1; Y <= H; ++Y) {
    long double b = std::pow(static_cast<long double>(Y), -2.0L - eta);
    long double fl = std::floor(x * Y);
    for (long double X = fl - 1; X <= fl + 2; ++X) {
      long double dx = std::fabs(X / Y - x), dr = std::fabs(X / Y - rho);
      if (std::fabs(dx - b) < 1e-12L * b || std::fabs(dr - 2 * b) < 1e-12L * b) return -1;
      if (dx < b && !(dr < 2 * b)) return 0;
    }
  }
  return 1;
}

long double ld(const Real& r) { return static_cast<long double>(to_double(r.enclose(80).mid())); }

}  // namespace

TEST(EEta, SelfMembership) {
  for (const Real& r : {golden(), rho49(), Real(QuadraticReal(Integer(0), Integer(1), Integer(2), Integer(1)))})
    for (const Rational& eta : {make_rational(1, 2), make_rational(1, 5), Rational(2)})
      EXPECT_TRUE(in_E_eta(r, r, eta, Integer(10000)));
}

TEST(EEta, AgreesWithDirectScan) {
  testutil::Rng rng(31);
  int decided = 0, members = 0;
  for (int k = 0; k < 60; ++k) {
    std::vector<Integer> common;
    for (int i = 0; i < static_cast<int>(rng.uniform(0, 5)); ++i) common.emplace_back(rng.uniform(1, 9));
    QuadraticReal x = random_quadratic(rng, common), rho = random_quadratic(rng, common);
    Rational eta = make_rational(rng.uniform(1, 4), 4);
    int want = scan_E(ld(Real(x)), ld(Real(rho)), to_double(eta), 2000);
    if (want < 0) continue;
    ++decided;
    members += want;
    EXPECT_EQ(in_E_eta(Real(x), Real(rho), eta, Integer(2000)), want == 1) << x.to_string() << " vs " << rho.to_string();
  }
  EXPECT_GT(decided, 40);
  EXPECT_GT(members, 0);
  EXPECT_LT(members, decided);
}

TEST(EEta, RationalPoint) {
  // 17/12 approximates sqrt 2 too well to be in E^eta(phi)
  EXPECT_FALSE(in_E_eta(Real(make_rational(17, 12)), golden(), make_rational(1, 2), Integer(100)));
  EXPECT_TRUE(in_E_eta(Real(make_rational(17, 12)), Real(make_rational(17, 12)), make_rational(1, 2), Integer(100)));
}

TEST(BEps, Conventions) {
  Rational e = make_rational(1, 10);
  EXPECT_TRUE(in_B_eps(golden(), golden(), e, 3, 30));
  EXPECT_TRUE(in_B_eps(rho49(), rho49(), e, 3, 30));
  EXPECT_TRUE(in_B_eps(golden(), Real(make_rational(3, 7)), e, 3, 30));
  EXPECT_FALSE(in_B_eps(Real(make_rational(3, 7)), golden(), e, 3, 30));
  EXPECT_THROW(in_B_eps(golden(), golden(), Rational(0), 3, 30), PreconditionError);
}

TEST(SPoint, GoldenIsFixed) {
  for (long N : {1L, 5L, 12L}) {
    QuadraticReal s = construct_S_point(golden(), make_rational(1, 10), N, Integer(1), make_rational(1, 2), 3);
    EXPECT_EQ(compare(Real(s), golden()), Ordering::equal);
  }
}

TEST(SPoint, AgreesWithRhoAndIsMember) {
  Real r = rho49();
  CFExpansion cf = expand(r, 13);
  QuadraticReal s = construct_S_point(r, make_rational(1, 10), 12, cf.digit(12), make_rational(1, 2), 3);
  CFExpansion sc = expand(s, 30);
  for (long i = 0; i < 12; ++i) EXPECT_EQ(sc.digit(i), cf.digit(i)) << i;
  EXPECT_EQ(sc.digit(12), cf.digit(12));
  for (long i = 13; i < 30; ++i) EXPECT_EQ(sc.digit(i), 1);
  EXPECT_TRUE(in_B_eps(Real(s), r, make_rational(1, 10), 3, 30));
  EXPECT_TRUE(in_E_eta(Real(s), r, make_rational(1, 2), Integer(10000)));
}

// m(rho) <= Q_{N-1}^(n-2) / a_N keeps alpha_N inside the window, so only a
// digit above alpha_N empties it.
TEST(SPoint, EmptyWindowReportsBothEnds) {
  Real r = rho49();
  for (long N = 1; N <= 12; ++N) {
    Integer alpha = expand(r, N).digit(N);
    SWindow w = s_window(r, make_rational(1, 10), N, alpha, 3);
    EXPECT_LE(w.lo, w.hi) << N;
  }
  try {
    construct_S_point(r, make_rational(1, 10), 2, Integer(30), make_rational(1, 2), 3);
    FAIL() << "expected an empty window";
  } catch (const PreconditionError& e) {
    std::string msg = e.what();
    SWindow w = s_window(r, make_rational(1, 10), 2, Integer(30), 3);
    EXPECT_LT(w.hi, w.lo);
    EXPECT_NE(msg.find("[" + to_string(w.lo) + ", " + to_string(w.hi) + "]"), std::string::npos) << msg;
  }
}

// S-points are in B_eps and E^eta for every admissible choice.
TEST(SPoint, ContainmentProperty) {
  for (const Real& r : {golden(), rho49()}) {
    CFExpansion cf = expand(r, 20);
    for (const Rational& e : {make_rational(1, 10), make_rational(1, 4)}) {
      for (long N = 3; N <= 14; ++N) {
        for (Integer h = 1; h <= cf.digit(N); h += std::max(Integer(1), Integer(cf.digit(N) / 3))) {
          SWindow w = s_window(r, e, N, h, 3);
          if (w.lo > w.hi) continue;
          QuadraticReal s = construct_S_point(r, e, N, h, make_rational(1, 2), 3);
          EXPECT_TRUE(in_B_eps(Real(s), r, e, 3, 30)) << "N=" << N << " h=" << h;
          EXPECT_TRUE(in_E_eta(Real(s), r, make_rational(1, 2), Integer(10000))) << "N=" << N << " h=" << h;
        }
      }
    }
  }
}

TEST(Cutting, DeepPrefixNearlyAlwaysPasses) {
  CFExpansion cf = expand(rho49(), 21);
  std::vector<Integer> prefix;
  for (long i = 1; i <= 20; ++i) prefix.push_back(cf.digit(i));
  EXPECT_GE(cutting_density_estimate(cf.digit(0), prefix, make_rational(1, 2), 10000, 1), make_rational(99, 100));
  std::vector<Integer> ones(20, Integer(1));
  EXPECT_EQ(cutting_density_estimate(Integer(1), ones, Rational(10), 2000, 1), 1);
}

TEST(Cutting, MonotoneInEtaAndReproducible) {
  testutil::Rng rng(2);
  for (int k = 0; k < 5; ++k) {
    std::vector<Integer> prefix;
    for (int i = 0; i < 6; ++i) prefix.emplace_back(rng.uniform(1, 4));
    Rational prev = 0;
    for (const Rational& eta : {make_rational(1, 10), make_rational(1, 4), make_rational(1, 2), Rational(1), Rational(3)}) {
      Rational d = cutting_density_estimate(Integer(0), prefix, eta, 500, 99);
      EXPECT_GE(d, prev);
      prev = d;
    }
    EXPECT_EQ(cutting_density_estimate(Integer(0), prefix, make_rational(1, 3), 1, 5),
              cutting_density_estimate(Integer(0), prefix, make_rational(1, 3), 1, 5));
  }
}

// Independent recount of the same samples through expand() and convergents().
TEST(Cutting, MatchesConvergentRecount) {
  std::vector<Integer> prefix{Integer(2), Integer(1), Integer(3)};
  const Rational eta = make_rational(1, 2);
  const long S = 400, N = 3;
  auto bc = convergents(CFExpansion::finite(Integer(0), prefix), N);
  Rational a = make_rational(bc[N].p, bc[N].q), b = make_rational(bc[N].p + bc[N - 1].p, bc[N].q + bc[N - 1].q);
  Rational lo = std::min(a, b), hi = std::max(a, b);
  long good = 0;
  for (long k = 0; k < S; ++k) {
    Rational x = sample_in(lo, hi, 4, static_cast<std::uint64_t>(k));
    CFExpansion cf = expand(x);
    long last = *cf.last_index();
    auto cs = convergents(cf, last);
    bool pass = true;
    for (long i = N; i + 1 <= last; ++i) {
      const Integer& Q = cs[i].q;
      if (Q * Q >= bc[N].q * bc[N].q * (Integer(1) << 50)) break;
      if (i - N >= 64) break;
      // alpha_{i+1} < Q_i^(1/2)
      if (cf.digit(i + 1) * cf.digit(i + 1) >= Q) {
        pass = false;
        break;
      }
    }
    good += pass;
  }
  EXPECT_EQ(cutting_density_estimate(Integer(0), prefix, eta, S, 4), make_rational(good, S));
}

TEST(Classify, RandomIntervalsProperties) {
  DiophParams p;
  testutil::Rng rng(13);
  for (const Real& r : {golden(), rho49()}) {
    RatInterval e = r.enclose(200);
    for (int k = 0; k < 12; ++k) {
      Rational wl = make_rational(rng.uniform(1, 1000), 1) / Rational(ipow(Integer(10), rng.uniform(1, 6)));
      Rational wr = make_rational(rng.uniform(1, 1000), 1) / Rational(ipow(Integer(10), rng.uniform(1, 6)));
      RatInterval iv(e.lo - wl / 1000, e.hi + wr / 1000);
      ClassifiedInterval c = structural_classify(r, iv, p, 3, 40, 17);
      EXPECT_EQ(c.interval, iv);
      EXPECT_GE(c.density_estimate, 0);
      EXPECT_LE(c.density_estimate, 1);
      if (c.kind == ClassifiedInterval::Kind::TypeI) {
        EXPECT_GE(c.density_estimate, 1 - p.tau1);
        continue;
      }
      ASSERT_TRUE(c.subinterval && c.C);
      EXPECT_TRUE(iv.contains(*c.subinterval));
      EXPECT_NE(compare(r, Real(c.subinterval->lo)), Ordering::less);
      EXPECT_NE(compare(r, Real(c.subinterval->hi)), Ordering::greater);
      EXPECT_GT(*c.C, 0);
      EXPECT_GE(c.subinterval->width(), *c.C * p.tau1 * p.epsilon * iv.width());
      ClassifiedInterval again = structural_classify(r, iv, p, 3, 40, 17);
      EXPECT_EQ(again.C, c.C);
      EXPECT_EQ(again.density_estimate, c.density_estimate);
    }
  }
}

TEST(Classify, CylinderPushesFirstFreeIndex) {
  DiophParams p;
  Real r = rho49();
  const long N = 9;
  auto cs = convergents(expand(r, N), N);
  Rational a = make_rational(cs[N].p, cs[N].q), b = make_rational(cs[N].p + cs[N - 1].p, cs[N].q + cs[N - 1].q);
  ClassifiedInterval c = structural_classify(r, RatInterval(std::min(a, b), std::max(a, b)), p, 3, 20, 1);
  EXPECT_GT(c.n0, N);
}

TEST(Classify, TinyIntervalAroundGoldenIsTypeI) {
  DiophParams p;
  RatInterval e = golden().enclose(200);
  Rational w = make_rational(1, 1000000000);
  ClassifiedInterval c = structural_classify(golden(), RatInterval(e.lo - w, e.hi + w), p, 3, 200, 3);
  EXPECT_EQ(c.kind, ClassifiedInterval::Kind::TypeI);
  EXPECT_GE(c.density_estimate, make_rational(95, 100));
}

TEST(Classify, RhoOutsideRejected) {
  DiophParams p;
  EXPECT_THROW(structural_classify(golden(), RatInterval(Rational(2), Rational(3)), p, 3, 10, 1), PreconditionError);
}

TEST(Ael, PositiveDiscriminantWitness) {
  DiophParams p;
  AelWitness w = ael_search(kMordellPos, make_rational(1, 4), p, 42);
  EXPECT_GE(*w.minimum.exact_value(), make_rational(3, 4));
  EXPECT_LE(w.transform.distance_to_identity().hi, make_rational(1, 4));
  EXPECT_NE(w.shift, 0);
  EXPECT_EQ(w.per_root_lower_bounds.size(), 3u);
  EXPECT_FALSE(w.interval_trace.empty());
  MinResult direct = m_estimate(act(kMordellPos, w.transform));
  EXPECT_EQ(direct.exact_value(), w.minimum.exact_value());
  AelWitness again = ael_search(kMordellPos, make_rational(1, 4), p, 42);
  EXPECT_EQ(again.shift, w.shift);
  EXPECT_EQ(again.iterations, w.iterations);
}

TEST(Ael, SingleRealRoot) {
  DiophParams p;
  AelWitness w = ael_search(kMordellNeg, make_rational(1, 4), p, 5);
  EXPECT_EQ(w.per_root_lower_bounds.size(), 1u);
  EXPECT_GE(*w.minimum.exact_value(), make_rational(3, 4));
  EXPECT_TRUE(is_ael_witness(kMordellNeg, w.transform, [] {
    DiophParams q;
    return q;
  }()));
}

TEST(Ael, IdentityWitnessAtEpsilonOne) {
  DiophParams p;
  p.epsilon = 1;
  EXPECT_TRUE(is_ael_witness(kMordellPos, Transform::identity(), p));
  EXPECT_TRUE(is_ael_witness(kMordellNeg, Transform::identity(), p));
}

TEST(Ael, BudgetExhausted) {
  DiophParams p;
  EXPECT_THROW(ael_search(kMordellPos, make_rational(1, 4), p, 1, 2), BudgetError);
  EXPECT_THROW(ael_search(BinaryForm::descending({1, 0, 1}), make_rational(1, 4), p, 1), PreconditionError);
}
