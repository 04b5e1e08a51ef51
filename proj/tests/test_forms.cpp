#include <gtest/gtest.h>

#include <cmath>

#include "formspec/field.hpp"
#include "formspec/forms.hpp"
#include "support.hpp"

using namespace formspec;

namespace {

const BinaryForm kMordellNeg = BinaryForm::descending({1, 0, -1, -1});  // x^3 - x y^2 - y^3
const BinaryForm kMordellPos = BinaryForm::descending({1, 1, -2, -1});  // x^3 + x^2 y - 2 x y^2 - y^3

BinaryForm random_form(testutil::Rng& rng, int n, long lim = 5) {
  for (;;) {
    std::vector<Rational> c;
    for (int i = 0; i <= n; ++i) c.emplace_back(rng.uniform(-lim, lim));
    if (c[n] == 0) c[n] = 1;
    return BinaryForm(c);
  }
}

// det-1 integer matrix as a product of elementary moves.
Transform random_sl2(testutil::Rng& rng, int moves = 4) {
  Rational a = 1, b = 0, c = 0, d = 1;
  for (int i = 0; i < moves; ++i) {
    long k = rng.uniform(-3, 3);
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

std::shared_ptr<NumberField> field_of(const IntPolynomial& p, int idx) {
  return std::make_shared<NumberField>(isolate_real_roots(p).at(idx));
}

}  // namespace

TEST(Discriminant, MordellAnchors) {
  EXPECT_EQ(discriminant(kMordellNeg), -23);
  EXPECT_EQ(discriminant(kMordellPos), 49);
  EXPECT_EQ(discriminant(BinaryForm::descending({1, 0, 0, 0})), 0);
  EXPECT_EQ(cubic_discriminant(kMordellNeg), -23);
  EXPECT_EQ(cubic_discriminant(kMordellPos), 49);
}

TEST(Discriminant, CubicClosedFormAgrees) {
  testutil::Rng rng(41);
  for (int t = 0; t < 300; ++t) {
    std::vector<Rational> c;
    for (int i = 0; i <= 3; ++i) c.push_back(make_rational(rng.uniform(-20, 20), rng.uniform(1, 6)));
    if (std::all_of(c.begin(), c.end(), [](const Rational& q) { return q == 0; })) continue;
    BinaryForm f(c);
    EXPECT_EQ(discriminant(f), cubic_discriminant(f)) << f.to_text();
  }
}

TEST(Discriminant, VanishingLeadingCoefficients) {
  EXPECT_EQ(discriminant(BinaryForm::parse("2: 0 1 0")), 1);  // xy
  EXPECT_EQ(discriminant(BinaryForm::parse("2: 1 0 -1")), 4);
  // x y (x + y): roots 0, -1 and infinity
  BinaryForm f = BinaryForm::parse("3: 0 1 1 0");
  EXPECT_EQ(discriminant(f), cubic_discriminant(f));
  EXPECT_EQ(discriminant(f), 1);
  // x y (x - y)(x + y): roots 0, 1, -1, infinity, moved to 2/3, 3/4, 1/2, 1
  BinaryForm h = BinaryForm::parse("4: 0 1 0 -1 0");
  BinaryForm g = act(h, Transform::rational(1, 2, 1, 3));
  std::vector<Rational> r{make_rational(2, 3), make_rational(3, 4), make_rational(1, 2), Rational(1)};
  Rational want = rpow(g.coeff(4), 6);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) want *= (r[i] - r[j]) * (r[i] - r[j]);
  for (const auto& z : r) EXPECT_EQ(g.eval(z, 1), 0);
  EXPECT_EQ(discriminant(h), want);
}

TEST(Discriminant, InvariantUnderSL2) {
  testutil::Rng rng(43);
  for (int t = 0; t < 100; ++t) {
    BinaryForm f = random_form(rng, static_cast<int>(rng.uniform(3, 6)));
    Transform T = random_sl2(rng);
    EXPECT_EQ(discriminant(act(f, T)), discriminant(f));
  }
}

TEST(Discriminant, ScalingLaw) {
  testutil::Rng rng(47);
  for (int t = 0; t < 100; ++t) {
    int n = static_cast<int>(rng.uniform(2, 6));
    BinaryForm f = random_form(rng, n);
    Rational k = make_rational(rng.uniform(-9, 9) | 1, rng.uniform(1, 7));
    EXPECT_EQ(discriminant(f.scaled(k)), rpow(k, 2 * n - 2) * discriminant(f));
  }
}

TEST(Act, IdentityAndTranslation) {
  EXPECT_EQ(act(kMordellNeg, Transform::identity()), kMordellNeg);
  BinaryForm g = act(kMordellNeg, Transform::rational(1, 1, 0, 1));
  // substitution oracle: g(z, 1) = f(z - 1, 1)
  for (long z = -5; z <= 5; ++z) EXPECT_EQ(g.eval(z, 1), kMordellNeg.eval(z - 1, 1));
  auto rf = real_roots(kMordellNeg).real_roots;
  auto rg = real_roots(g).real_roots;
  ASSERT_EQ(rf.size(), 1u);
  ASSERT_EQ(rg.size(), 1u);
  EXPECT_EQ(compare(Real(rg[0]), Real(rf[0]) + Real(1L)), Ordering::equal);
  EXPECT_EQ(rg[0].minpoly(), kMordellNeg.dehomogenized().shift(Integer(-1)).primitive());
}

TEST(Act, ComposesAsLeftAction) {
  testutil::Rng rng(53);
  for (int t = 0; t < 100; ++t) {
    BinaryForm f = random_form(rng, static_cast<int>(rng.uniform(2, 5)));
    Transform S = random_sl2(rng), T = random_sl2(rng);
    EXPECT_EQ(act(act(f, S), T), act(f, T * S));
  }
}

TEST(Act, RootsMoveByMobius) {
  testutil::Rng rng(59);
  for (int t = 0; t < 30; ++t) {
    Transform T = random_sl2(rng);
    auto [a, b, c, d] = T.rational_entries();
    BinaryForm g = act(kMordellPos, T);
    // every real root r of f gives g((a r + b)/(c r + d), 1) = 0 on the finite ones
    for (const auto& r : real_roots(kMordellPos).real_roots) {
      Real img = T.apply(Real(r));
      RatInterval e = img.enclose(80);
      RatInterval v(Rational(0));
      for (int i = g.degree(); i >= 0; --i) v = v * e + RatInterval(g.coeff(i));
      EXPECT_TRUE(v.contains_zero() || abs(v).hi < pow2(-40));
    }
    EXPECT_THROW(Transform::rational(a, b, c, d + 1), PreconditionError);
  }
}

TEST(Roots, Profiles) {
  auto p = real_roots(kMordellPos);
  ASSERT_EQ(p.real_count, 3);
  const double pi = std::acos(-1.0);
  double want[3] = {2 * std::cos(2 * pi / 7), 2 * std::cos(4 * pi / 7), 2 * std::cos(6 * pi / 7)};
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p.real_roots[i].approx(), want[i], 1e-12);
  EXPECT_EQ(compare(p.real_roots[0], p.real_roots[1]), Ordering::greater);
  EXPECT_EQ(compare(p.real_roots[1], p.real_roots[2]), Ordering::greater);

  auto q = real_roots(kMordellNeg);
  ASSERT_EQ(q.real_count, 1);
  EXPECT_EQ(q.real_roots[0].minpoly(), IntPolynomial({-1, -1, 0, 1}));

  auto r = real_roots(BinaryForm::parse("3: 1 -1 1 -1"));  // (x^2 + y^2)(x - y)
  ASSERT_EQ(r.real_count, 1);
  EXPECT_TRUE(r.real_roots[0].is_rational());
  EXPECT_EQ(r.real_roots[0].rational_value(), 1);

  EXPECT_THROW(real_roots(BinaryForm::parse("3: 1 -2 1 0")), PreconditionError);
}

TEST(Roots, QuadraticRootsBecomeExact) {
  auto r = real_roots(BinaryForm::parse("2: 1 -1 -1")).real_roots;
  Real g = root_as_real(r[0]);
  ASSERT_NE(g.quadratic(), nullptr);
  EXPECT_EQ(*g.quadratic(), QuadraticReal(Integer(1), Integer(1), Integer(5), Integer(2)));
  EXPECT_EQ(*root_as_real(r[1]).quadratic(), QuadraticReal(Integer(1), Integer(-1), Integer(5), Integer(2)));
}

TEST(FromRoots, NegativeDiscriminantBase) {
  auto k = field_of(IntPolynomial({-1, -1, 0, 1}), 0);
  FieldElement rho = FieldElement::generator(k);
  FieldElement one(k, Rational(1));
  // (x + rho/2 y)^2 + (3/4 rho^2 - 1) y^2 = x^2 + rho x y + (rho^2 - 1) y^2
  RealForm f = from_roots({Real(rho)}, {{Real(one), Real(rho), Real(rho * rho - one)}}, 1);
  auto e = f.exact();
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(*e, kMordellNeg);
  EXPECT_EQ(f.discriminant().exact_rational(), Rational(-23));
}

TEST(FromRoots, RationalRoots) {
  RealForm f = from_roots({Real(0L), Real(1L), Real(-1L)}, {}, 1);
  EXPECT_EQ(*f.exact(), BinaryForm::parse("3: 1 0 -1 0"));
  auto r = f.real_roots();
  EXPECT_EQ(*r[0].exact_rational(), 1);
  EXPECT_EQ(*r[2].exact_rational(), -1);
  EXPECT_THROW(from_roots({Real(0L)}, {{Real(1L), Real(3L), Real(1L)}}, 1), PreconditionError);
}

TEST(FromRoots, RoundTrip) {
  testutil::Rng rng(61);
  for (int t = 0; t < 60; ++t) {
    std::vector<Real> reals;
    std::vector<Rational> used;
    int k = static_cast<int>(rng.uniform(1, 3));
    while (static_cast<int>(reals.size()) < k) {
      Rational q = make_rational(rng.uniform(-30, 30), rng.uniform(1, 5));
      if (std::find(used.begin(), used.end(), q) != used.end()) continue;
      used.push_back(q);
      reals.emplace_back(q);
    }
    std::vector<std::array<Real, 3>> quads;
    long B = rng.uniform(-4, 4);
    quads.push_back({Real(1L), Real(B), Real(B * B / 4 + rng.uniform(1, 5))});
    Rational s = make_rational(rng.uniform(1, 9), rng.uniform(1, 4));
    RealForm f = from_roots(reals, quads, s);
    auto e = f.exact();
    ASSERT_TRUE(e.has_value());
    auto back = real_roots(*e).real_roots;
    std::sort(used.begin(), used.end(), [](const Rational& a, const Rational& b) { return a > b; });
    ASSERT_EQ(back.size(), used.size());
    for (std::size_t i = 0; i < used.size(); ++i) {
      ASSERT_TRUE(back[i].is_rational());
      EXPECT_EQ(back[i].rational_value(), used[i]);
    }
  }
}

TEST(NormalizedMinimum, Anchors) {
  RatInterval p = normalized_minimum(kMordellPos, 1, 60);
  EXPECT_NEAR(to_double(p.mid()), std::pow(49.0, -0.25), 1e-12);
  EXPECT_LT(p.width(), pow2(-50));
  RatInterval n = normalized_minimum(kMordellNeg, 1, 60);
  EXPECT_NEAR(to_double(n.mid()), std::pow(23.0, -0.25), 1e-12);
  EXPECT_EQ(normalized_minimum(kMordellNeg, 0), RatInterval(Rational(0)));
  EXPECT_THROW(normalized_minimum(BinaryForm::parse("3: 1 0 0 0"), 1), PreconditionError);
}

TEST(RealForm, DiagonalMatchesExplicitEntries) {
  testutil::Rng rng(67);
  for (int t = 0; t < 20; ++t) {
    Rational th = make_rational(rng.uniform(1, 40), rng.uniform(1, 40));
    RealForm f(kMordellPos);
    RealForm g = f.act(Transform::diagonal(th));
    Real s = sqrt(Real(th));
    RealForm h = f.act(Transform::real(s, Real(0L), Real(0L), Real(1L) / s));
    for (int j = 0; j < 10; ++j) {
      Integer x = rng.uniform(-50, 50), y = rng.uniform(-50, 50);
      RatInterval a = g.value(x, y).enclose(60), b = h.value(x, y).enclose(60);
      EXPECT_TRUE(overlaps(a, b)) << to_string(a) << " " << to_string(b);
      EXPECT_EQ(g.sign_at(x, y), h.value(x, y).sign(1024));
    }
    EXPECT_EQ(*g.discriminant().exact_rational(), 49);
  }
}

TEST(RealForm, FactoredDiscriminantAndAction) {
  auto k = field_of(IntPolynomial({-1, -2, 1, 1}), 2);
  FieldElement rho = FieldElement::generator(k);
  FieldElement two(k, Rational(2)), one(k, Rational(1));
  FieldElement chi = rho * rho - two, psi = one - rho - rho * rho;
  RealForm f = RealForm::factored(Real(1L), {Real(rho), Real(chi), Real(psi)}, {});
  EXPECT_EQ(*f.exact(), kMordellPos);
  EXPECT_EQ(*f.discriminant().exact_rational(), 49);
  Transform T = Transform::rational(2, 1, 1, 1);
  RealForm g = f.act(T);
  EXPECT_EQ(*g.exact(), act(kMordellPos, T));
  EXPECT_EQ(*g.discriminant().exact_rational(), 49);
  for (long x = -4; x <= 4; ++x)
    for (long y = -4; y <= 4; ++y) EXPECT_EQ(g.sign_at(x, y), sign_of(act(kMordellPos, T).eval(x, y)));
}
