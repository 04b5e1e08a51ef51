#include <gtest/gtest.h>

#include <cmath>

#include "formspec/minima.hpp"
#include "support.hpp"

using namespace formspec;

namespace {

const BinaryForm kMordellNeg = BinaryForm::descending({1, 0, -1, -1});
const BinaryForm kMordellPos = BinaryForm::descending({1, 1, -2, -1});

Point pt(long x, long y) { return {Integer(x), Integer(y)}; }

Rational exact(const MinResult& r) {
  auto v = r.exact_value();
  EXPECT_TRUE(v.has_value());
  return v.value_or(Rational(-1));
}

BinaryForm random_form(testutil::Rng& rng, int n, long lim = 4) {
  for (;;) {
    std::vector<Rational> c;
    for (int i = 0; i <= n; ++i) c.emplace_back(rng.uniform(-lim, lim));
    if (c[n] == 0) c[n] = 1;
    BinaryForm f(c);
    if (discriminant(f) != 0) return f;
  }
}

Transform random_sl2(testutil::Rng& rng, int moves = 4) {
  Rational a = 1, b = 0, c = 0, d = 1;
  for (int i = 0; i < moves; ++i) {
    long k = rng.uniform(-2, 2);
    if (rng.uniform(0, 1)) {
      b += k * a;
      d += k * c;
    } else {
      a += k * b;
      c += k * d;
    }
  }
  return Transform::rational(a, b, c, d);
}

// Naive scan with plain doubles; only used on forms with small integer values.
double naive_min(const BinaryForm& f, long T) {
  double best = INFINITY;
  for (long y = 0; y <= T; ++y)
    for (long x = -T; x <= T; ++x) {
      if (x == 0 && y == 0) continue;
      best = std::min(best, std::fabs(to_double(f.eval(Rational(x), Rational(y)))));
    }
  return best;
}

}  // namespace

TEST(BruteForce, MordellForms) {
  for (const auto& f : {kMordellNeg, kMordellPos}) {
    MinResult r = brute_force_min(f, 50);
    EXPECT_EQ(exact(r), 1);
    EXPECT_EQ(*r.attaining, pt(1, 0));
    EXPECT_FALSE(r.certified);
  }
}

TEST(BruteForce, RationalRootTieBreak) {
  MinResult r = brute_force_min(BinaryForm::descending({1, 0, -1, 0}), 2);
  EXPECT_EQ(exact(r), 0);
  EXPECT_EQ(*r.attaining, pt(0, 1));
}

TEST(BruteForce, MatchesNaiveScan) {
  testutil::Rng rng(11);
  for (int k = 0; k < 12; ++k) {
    BinaryForm f = random_form(rng, 3 + k % 3);
    MinResult r = brute_force_min(f, 12);
    EXPECT_DOUBLE_EQ(to_double(exact(r)), naive_min(f, 12)) << f.to_text();
  }
}

TEST(BruteForce, IndependentOfWorkerCount) {
  RealForm g = RealForm(kMordellPos).act(Transform::diagonal(make_rational(7, 5)));
  MinResult a = brute_force_min(g, 40, 1), b = brute_force_min(g, 40, 7);
  EXPECT_EQ(*a.attaining, *b.attaining);
  EXPECT_EQ(compare(a.value, b.value), Ordering::equal);
}

TEST(Candidates, Fibonacci) {
  auto cs = convergent_candidates(BinaryForm::descending({1, -1, -1}), 6);
  ASSERT_FALSE(cs.empty());
  for (const auto& c : cs) {
    if (c.root != 0) continue;
    EXPECT_EQ(c.value, RatInterval(Rational(1)));
  }
  std::vector<Point> seen;
  for (const auto& c : cs)
    if (c.root == 0) seen.emplace_back(c.x, c.y);
  ASSERT_GE(seen.size(), 4u);
  EXPECT_EQ(seen[1], pt(2, 1));
  EXPECT_EQ(seen[2], pt(3, 2));
  EXPECT_EQ(seen[3], pt(5, 3));
}

TEST(Candidates, NoRealRoots) {
  EXPECT_TRUE(convergent_candidates(BinaryForm::descending({1, 0, 1}), 10).empty());
}

TEST(Candidates, ValuesMatchDirectEvaluation) {
  auto cs = convergent_candidates(kMordellPos, 5);
  EXPECT_EQ(cs.size(), 18u);
  for (const auto& c : cs) {
    Rational v = abs_of(kMordellPos.eval(Rational(c.x), Rational(c.y)));
    EXPECT_TRUE(c.value.contains(v));
  }
}

TEST(Candidates, ZeroDiscriminantRejected) {
  EXPECT_THROW(convergent_candidates(BinaryForm::descending({1, -2, 1}), 4), PreconditionError);
  EXPECT_THROW(m_estimate(BinaryForm::descending({1, 0, -3, 2})), PreconditionError);
}

TEST(Estimate, MordellCertified) {
  for (const auto& f : {kMordellNeg, kMordellPos}) {
    MinResult r = m_estimate(f);
    EXPECT_EQ(exact(r), 1);
    EXPECT_EQ(*r.attaining, pt(1, 0));
    EXPECT_TRUE(r.certified) << r.certificate_note;
    EXPECT_EQ(r.box_bound, 100);
    EXPECT_EQ(r.cf_depth, 30);
  }
}

TEST(Estimate, RationalRootCertifiedZero) {
  MinResult r = m_estimate(BinaryForm::descending({2, -1, -5, 3, 1}));  // (x - y) * ...
  EXPECT_EQ(exact(r), 0);
  EXPECT_TRUE(r.certified);
}

TEST(Estimate, EtaRange) {
  MinOptions o;
  o.eta = Rational(1);
  EXPECT_THROW(m_estimate(kMordellNeg, o), PreconditionError);
  o.eta = make_rational(1, 3);
  EXPECT_NO_THROW(m_estimate(kMordellNeg, o));
}

// The reduced box must agree with the exhaustive scan; at depth 0 the only
// convergent candidates are (a0, 1), inside the box.
TEST(Estimate, ReducedBoxEqualsScan) {
  testutil::Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    BinaryForm f = random_form(rng, 3 + k % 3);
    MinOptions o;
    o.box = 30;
    o.depth = 0;
    MinResult a = m_estimate(f, o), b = brute_force_min(f, 30);
    EXPECT_EQ(exact(a), exact(b)) << f.to_text();
    EXPECT_EQ(*a.attaining, *b.attaining) << f.to_text();
  }
}

TEST(Estimate, ReducedBoxEqualsScanRealForms) {
  testutil::Rng rng(8);
  for (int k = 0; k < 8; ++k) {
    BinaryForm f = random_form(rng, 3);
    Rational theta = make_rational(rng.uniform(50, 200), 100);
    RealForm g = RealForm(f).act(Transform::diagonal(theta));
    MinOptions o;
    o.box = 25;
    o.depth = 0;
    MinResult a = m_estimate(g, o), b = brute_force_min(g, 25);
    EXPECT_EQ(*a.attaining, *b.attaining) << f.to_text();
    EXPECT_EQ(compare(a.value, b.value), Ordering::equal);
  }
}

TEST(Estimate, OracleEquivalenceWhenCertified) {
  testutil::Rng rng(21);
  int certified = 0;
  for (int k = 0; k < 24; ++k) {
    BinaryForm f = random_form(rng, 3 + k % 3);
    MinOptions o;
    o.box = 25;
    MinResult r = m_estimate(f, o);
    if (!r.certified) continue;
    ++certified;
    MinResult b = brute_force_min(f, 100);
    EXPECT_EQ(exact(r), exact(b)) << f.to_text();
  }
  EXPECT_GT(certified, 0);
}

TEST(Estimate, Monotone) {
  testutil::Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    BinaryForm f = random_form(rng, 3 + k % 2, 9);
    for (long T : {5L, 10L, 40L}) {
      for (long D : {2L, 8L, 20L}) {
        MinOptions o;
        o.box = T;
        o.depth = D;
        Rational v = exact(m_estimate(f, o));
        MinOptions smaller = o;
        smaller.depth = D / 2;
        EXPECT_LE(v, exact(m_estimate(f, smaller)));
        smaller = o;
        smaller.box = T / 2;
        EXPECT_LE(v, exact(m_estimate(f, smaller)));
      }
    }
  }
}

TEST(Estimate, AttainingConsistency) {
  testutil::Rng rng(17);
  for (int k = 0; k < 10; ++k) {
    BinaryForm f = random_form(rng, 3 + k % 3);
    MinResult r = m_estimate(f);
    ASSERT_TRUE(r.attaining);
    EXPECT_EQ(abs_of(f.eval(Rational(r.attaining->first), Rational(r.attaining->second))), exact(r));
  }
  RealForm g = RealForm(kMordellNeg).act(Transform::diagonal(make_rational(3, 2)));
  MinResult r = m_estimate(g);
  Real direct = abs(g.value(r.attaining->first, r.attaining->second));
  EXPECT_EQ(compare(direct, r.value), Ordering::equal);
}

TEST(Estimate, Scaling) {
  testutil::Rng rng(4);
  for (int k = 0; k < 8; ++k) {
    BinaryForm f = random_form(rng, 3 + k % 2);
    Rational lam = make_rational(rng.uniform(-9, 9) | 1, rng.uniform(1, 7));
    MinResult a = m_estimate(f), b = m_estimate(f.scaled(lam));
    EXPECT_EQ(exact(b), abs_of(lam) * exact(a));
    EXPECT_EQ(*a.attaining, *b.attaining);
  }
}

TEST(Estimate, IntegerUnimodularInvariance) {
  testutil::Rng rng(9);
  for (const auto& f : {kMordellNeg, kMordellPos}) {
    for (int k = 0; k < 6; ++k) {
      BinaryForm g = act(f, random_sl2(rng));
      MinResult r = m_estimate(g);
      EXPECT_EQ(exact(r), 1) << g.to_text();
      EXPECT_TRUE(r.certified);
    }
  }
  // generic forms: estimates agree once both sides are certified
  for (int k = 0; k < 8; ++k) {
    BinaryForm f = random_form(rng, 3);
    BinaryForm g = act(f, random_sl2(rng, 2));
    MinResult a = m_estimate(f), b = m_estimate(g);
    if (a.certified && b.certified) EXPECT_EQ(exact(a), exact(b)) << f.to_text();
  }
}

TEST(Estimate, HeuristicLabelForCubicRoots) {
  RealForm g = RealForm(kMordellPos).act(Transform::diagonal(make_rational(11, 10)));
  MinResult r = m_estimate(g);
  EXPECT_FALSE(r.certified);
  EXPECT_NE(r.certificate_note.find("heuristic at depth 30"), std::string::npos) << r.certificate_note;
}

TEST(RootMin, Rational) {
  RootMinResult r = m_rho(Real(make_rational(7, 3)), 3, 10);
  EXPECT_EQ(r.value.exact_rational(), Rational(0));
}

// Independent oracle: scan every Y up to the last convergent denominator.
double scan_root(double rho, int n, long maxY) {
  double best = INFINITY;
  for (long Y = 1; Y <= maxY; ++Y) {
    double X = std::nearbyint(Y * rho);
    best = std::min(best, std::pow(static_cast<double>(Y), n - 1) * std::fabs(Y * rho - X));
  }
  return best;
}

TEST(RootMin, MatchesScan) {
  struct Case {
    Real rho;
    double approx;
  };
  QuadraticReal phi(Integer(1), Integer(1), Integer(5), Integer(2));
  QuadraticReal sq2(Integer(0), Integer(1), Integer(2), Integer(1));
  std::vector<Case> cases{{Real(phi), (1 + std::sqrt(5.0)) / 2}, {Real(sq2), std::sqrt(2.0)}};
  auto cubes = isolate_real_roots(IntPolynomial({-2, 0, 0, 1}));
  cases.push_back({Real(cubes[0]), std::cbrt(2.0)});
  for (const auto& c : cases) {
    for (int n : {2, 3}) {
      const long depth = 12;
      RootMinResult r = m_rho(c.rho, n, depth);
      ExpandOptions opt;
      auto cs = convergents(expand(c.rho, depth, opt), depth);
      double want = scan_root(c.approx, n, cs.back().q.get_si());
      EXPECT_NEAR(to_double(r.enclosure.mid()), want, 1e-9 * std::max(1.0, want));
      EXPECT_GE(to_double(r.enclosure.lo), 0);
    }
  }
}

TEST(RootMin, GoldenRatioDegreeTwo) {
  QuadraticReal phi(Integer(1), Integer(1), Integer(5), Integer(2));
  RootMinResult r = m_rho(Real(phi), 2, 20);
  // attained at (2, 1): 2 - phi
  EXPECT_NEAR(to_double(r.enclosure.mid()), 2 - (1 + std::sqrt(5.0)) / 2, 1e-15);
  EXPECT_EQ(r.attaining_index, 1);
}
