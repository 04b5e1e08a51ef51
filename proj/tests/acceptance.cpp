// One PASS/FAIL line per criterion. With an argument only that criterion runs.

#include "formspec/cf.hpp"
#include "formspec/dioph.hpp"
#include "formspec/spectrum.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <iomanip>
#include <random>
#include <sstream>

using namespace formspec;

namespace {

const BinaryForm kMordell23 = BinaryForm::descending({1, 0, -1, -1});
const BinaryForm kMordell49 = BinaryForm::descending({1, 1, -2, -1});

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "failed: " << what << "; ";
    ok = ok && cond;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Real golden() { return Real(QuadraticReal(Integer(1), Integer(1), Integer(5), Integer(2))); }
Real rho49() { return Real(isolate_real_roots(IntPolynomial({-1, -2, 1, 1})).back()); }

QuadraticReal qabs(QuadraticReal q) { return q.sign() < 0 ? -q : q; }

void mordell_anchors(Check& c) {
  auto t0 = std::chrono::steady_clock::now();
  c.require(discriminant(kMordell23) == -23, "disc -23");
  c.require(discriminant(kMordell49) == 49, "disc 49");
  for (const BinaryForm* f : {&kMordell23, &kMordell49}) {
    MinResult m = m_estimate(*f, MinOptions{100, 30});
    c.require(m.exact_value() == Rational(1), "m = 1");
    c.require(m.attaining && *m.attaining == Point(1, 0), "attained at (1,0)");
    c.require(m.certified, "certified");
  }
  double s = seconds_since(t0);
  c.require(s < 5, "runtime");
  c.detail << "D = -23, 49; m = 1 at (1,0) twice; " << s << " s";
}

void neg_disc(Check& c) {
  RealForm f0 = neg_disc_family(0);
  std::mt19937_64 g(11);
  std::uniform_int_distribution<long> d(-100000, 100000);
  Rational prev;
  bool first = true;
  for (Rational t : {Rational(0), make_rational(1, 2), Rational(1), Rational(5), Rational(10)}) {
    RealForm ft = neg_disc_family(t);
    c.require((ft.value(1, 0) - Real(1L)).sign() == 0, "P_t(1,0) = 1");
    long bad = 0;
    for (int k = 0; k < 10000; ++k) {
      long x = d(g), y = d(g);
      if (x == 0 && y == 0) continue;
      Real a = abs(ft.value(x, y)), b = Real(abs_of(kMordell23.eval(x, y)));
      // exact: ties only on y = 0, where both sides are |x|^3
      if (y == 0 ? (a - b).sign() != 0 : compare(a, b, 1L << 11) == Ordering::less) ++bad;
    }
    c.require(bad == 0, "domination at t = " + to_string(t));
    RatInterval D = abs(ft.discriminant().enclose(96));
    RatInterval nm = nth_root(RatInterval(23, 23) / D, 4, 80);
    if (!first) c.require(nm.hi < prev, "normalized minimum decreasing at t = " + to_string(t));
    c.detail << "t=" << to_string(t) << " norm=" << to_double(nm.mid()) << " ";
    prev = nm.lo;
    first = false;
  }
}

void pos_disc(Check& c) {
  auto t0 = std::chrono::steady_clock::now();
  for (long k : {1, 2, 4, 8}) {
    PosDiscFamily F = pos_disc_family(Rational(k), 20);
    MinResult m = m_estimate(F.form, MinOptions{100, 30});
    c.require(m.certified, "certified c=" + std::to_string(k));
    Rational cm = Rational(k) * m.enclosure.mid();
    c.require(abs_of(cm - 1) <= make_rational(1, 20), "c m near 1 for c=" + std::to_string(k));
    RatInterval D = F.form.discriminant().enclose(64);
    c.require(abs_of(D.mid() - 49) <= make_rational(49, 20), "disc near 49");
    c.detail << "c=" << k << " c*m=" << std::setprecision(12) << to_double(cm) << " ";
  }
  double s = seconds_since(t0);
  c.require(s < 60, "runtime");
  c.detail << s << " s";
}

void markoff(Check& c) {
  auto ts = markoff_triples(1000);
  c.require(ts.size() >= 3, "at least three triples");
  if (ts.size() < 3) return;
  for (const auto& e : ts) {
    const auto& t = e.triple;
    c.require(t.x * t.x + t.y * t.y + t.z * t.z == 3 * t.x * t.y * t.z, "Markoff equation");
    c.require((e.value - QuadraticReal(make_rational(1, 3))).sign() > 0, "value above 1/3");
  }
  // distinct z live in different quadratic fields; compare through enclosures
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (ts[i].triple.z == ts[i - 1].triple.z)
      c.require(ts[i].value == ts[i - 1].value, "equal z, equal value");
    else
      c.require(ts[i].enclosure.hi < ts[i - 1].enclosure.lo, "descending");
  }
  auto inv_sqrt = [](long k) { return QuadraticReal(Integer(0), Integer(1), Integer(k), Integer(k)); };
  c.require(ts[0].value == inv_sqrt(5), "1/sqrt5 first");
  c.require(ts[1].value == inv_sqrt(8), "1/sqrt8 second");
  c.require(ts[2].value == QuadraticReal(Integer(0), Integer(5), Integer(221), Integer(221)), "5/sqrt221 third");
  FreimanConstant fc = freiman_constant();
  QuadraticReal closed(Integer(2221564096), Integer(283748), Integer(462), Integer(491993569));
  c.require(fc.value * closed == QuadraticReal(Rational(1)), "Freiman closed form");
  c.require(fc.enclosure.contains(Real(QuadraticReal(Rational(1)) / closed).enclose(200).mid()), "Freiman enclosure");
  c.detail << ts.size() << " triples, last z=" << ts.back().triple.z.get_str() << "; freiman "
           << to_double(fc.enclosure.mid());
}

// half rationals, half periodic quadratics
QuadraticReal random_expansion_value(testutil::Rng& rng, int t) {
  Integer a0 = rng.uniform(-30, 30);
  std::vector<Integer> prefix, block;
  for (int i = rng.uniform(1, 10); i > 0; --i) prefix.emplace_back(rng.uniform(1, 40));
  if (t % 2 == 0) {
    prefix.back() = std::max(prefix.back(), Integer(2));
    auto cf = CFExpansion::finite(a0, prefix);
    auto cs = convergents(cf, static_cast<long>(prefix.size()));
    return QuadraticReal(make_rational(cs.back().p, cs.back().q));
  }
  for (int i = rng.uniform(1, 3); i > 0; --i) block.emplace_back(rng.uniform(1, 40));
  return assemble(a0, prefix, block);
}

Rational eval_cf(const std::vector<Integer>& d) {
  Rational v = d.back();
  for (std::size_t i = d.size() - 1; i-- > 0;) v = Rational(d[i]) + 1 / v;
  return v;
}

void cf_identities(Check& c) {
  testutil::Rng rng(2024);
  long checked_best = 0, lemma_hits = 0;
  for (int t = 0; t < 1000; ++t) {
    QuadraticReal x = random_expansion_value(rng, t);
    CFExpansion cf = expand(x, 12);
    long last = cf.last_index().value_or(12);
    last = std::min(last, 12L);
    auto cs = convergents(cf, last);
    for (long i = 0; i <= last; ++i) {
      const auto& k = cs[i];
      if (i >= 1) {
        Integer det = k.p * cs[i - 1].q - cs[i - 1].p * k.q;
        c.require(det == ((i % 2 == 1) ? 1 : -1), "determinant");
      }
      if (i >= 2) {
        c.require(k.p == cf.digit(i) * cs[i - 1].p + cs[i - 2].p, "p recurrence");
        c.require(k.q == cf.digit(i) * cs[i - 1].q + cs[i - 2].q, "q recurrence");
      }
      QuadraticReal err = qabs(x - QuadraticReal(make_rational(k.p, k.q)));
      RatInterval e = approx_error(cf, i);
      c.require(compare(err, e.lo) != Ordering::less && compare(err, e.hi) != Ordering::greater,
                "approx_error encloses");
      c.require(is_convergent(cf, k.p, k.q, last), "convergent detected");
      // best approximation of the second kind against every smaller denominator
      if (i >= 1 && k.q <= 400 && k.q > cs[i - 1].q) {
        QuadraticReal best = qabs(x * QuadraticReal(Rational(k.q)) - QuadraticReal(Rational(k.p)));
        for (long Y = 1; Y < k.q.get_si(); ++Y) {
          QuadraticReal yx = x * QuadraticReal(Rational(Y));
          Integer f = yx.floor();
          for (Integer X : {f, Integer(f + 1)}) {
            QuadraticReal e2 = qabs(yx - QuadraticReal(Rational(X)));
            c.require(compare(e2, best) == Ordering::greater, "best approximation");
          }
        }
        ++checked_best;
      }
    }
    // every X/Y with |x - X/Y| < 1/(2 Y^2), Y <= 300, is a convergent
    CFExpansion deep = expand(x, 0);
    for (long Y = 1; Y <= 300; ++Y) {
      QuadraticReal yx = x * QuadraticReal(Rational(Y));
      Integer f = yx.floor();
      for (Integer X : {f, Integer(f + 1)}) {
        if (gcd(X, Integer(Y)) != 1) continue;
        QuadraticReal d = qabs(x - QuadraticReal(make_rational(X, Y)));
        if (compare(d, make_rational(1, 2 * Y * Y)) != Ordering::less) continue;
        c.require(is_convergent(deep, X, Integer(Y), 200), "close rational is convergent");
        ++lemma_hits;
      }
    }
  }
  for (int t = 0; t < 1000; ++t) {
    std::vector<Integer> prefix;
    for (int i = rng.uniform(0, 8); i > 0; --i) prefix.emplace_back(rng.uniform(1, 30));
    Integer a0 = rng.uniform(-5, 5), k = rng.uniform(1, 40);
    auto with = [&](const Integer& last) {
      std::vector<Integer> d{a0};
      d.insert(d.end(), prefix.begin(), prefix.end());
      d.push_back(last);
      return eval_cf(d);
    };
    c.require(cylinder_measure(a0, prefix, k) == abs_of(Rational(with(k) - with(k + 1))), "cylinder measure");
  }
  c.detail << "1000 expansions, " << checked_best << " best-approx scans, " << lemma_hits
           << " close rationals, 1000 cylinders";
}

void s_lemma(Check& c) {
  const Rational eta = make_rational(1, 2);
  long points = 0;
  for (const Real& r : {golden(), rho49()}) {
    for (const Rational& e : {make_rational(1, 10), make_rational(1, 4)}) {
      for (long N : {8L, 12L}) {
        // admissible h: 1 <= h <= min(alpha_N, window top)
        Integer top = std::min(s_window(r, e, N, Integer(1), 3).hi, expand(r, N).digit(N));
        if (top < 1) continue;
        Integer step = std::max(Integer(1), Integer(top / 8));
        std::vector<Integer> hs;
        for (Integer h = 1; h <= top; h += step) hs.push_back(h);
        if (hs.back() != top) hs.push_back(top);
        for (const Integer& h : hs) {
          QuadraticReal s = construct_S_point(r, e, N, h, eta, 3);
          c.require(in_B_eps(Real(s), r, e, 3, 30), "in B_eps N=" + std::to_string(N) + " h=" + h.get_str());
          c.require(in_E_eta(Real(s), r, eta, Integer(10000)), "in E_eta N=" + std::to_string(N) + " h=" + h.get_str());
          ++points;
        }
      }
    }
  }
  c.require(points > 0, "some S-points");
  c.detail << points << " S-points checked";
}

void classification(Check& c) {
  DiophParams p;
  testutil::Rng rng(13);
  long type1 = 0, type2 = 0;
  Rational minC = -1;
  for (const Real& r : {golden(), rho49()}) {
    RatInterval e = r.enclose(200);
    for (int k = 0; k < 100; ++k) {
      Rational wl = Rational(rng.uniform(1, 1000)) / Rational(ipow(Integer(10), rng.uniform(1, 6)));
      Rational wr = Rational(rng.uniform(1, 1000)) / Rational(ipow(Integer(10), rng.uniform(1, 6)));
      RatInterval iv(e.lo - wl / 1000, e.hi + wr / 1000);
      ClassifiedInterval ci = structural_classify(r, iv, p, 3, 40, 17);
      if (ci.kind == ClassifiedInterval::Kind::TypeI) {
        ++type1;
        continue;
      }
      ++type2;
      bool shaped = ci.subinterval && ci.C;
      c.require(shaped, "TypeII carries subinterval and C");
      if (!shaped) continue;
      c.require(iv.contains(*ci.subinterval), "containment");
      c.require(*ci.C > 0, "C > 0");
      c.require(ci.subinterval->width() >= *ci.C * p.tau1 * p.epsilon * iv.width(), "length ratio");
      ClassifiedInterval again = structural_classify(r, iv, p, 3, 40, 17);
      c.require(again.C == ci.C && again.kind == ci.kind, "stable under seed");
      if (minC < 0 || *ci.C < minC) minC = *ci.C;
    }
  }
  c.detail << type1 << " TypeI, " << type2 << " TypeII";
  if (minC >= 0) c.detail << ", min C " << to_double(minC);
}

void ael(Check& c) {
  DiophParams p;
  p.epsilon = make_rational(1, 4);
  AelWitness w = ael_search(kMordell49, p.epsilon, p, 42, 10000);
  auto v = w.minimum.exact_value();
  c.require(v && *v >= make_rational(3, 4), "m >= 3/4");
  c.require(w.iterations <= 10000, "budget");
  MinResult direct = m_estimate(act(kMordell49, w.transform));
  c.require(direct.exact_value() == v, "independent m_estimate agrees");
  c.require(is_ael_witness(kMordell49, w.transform, p), "witness re-check");
  AelWitness again = ael_search(kMordell49, p.epsilon, p, 42, 10000);
  c.require(again.shift == w.shift && again.iterations == w.iterations, "reproducible");
  c.detail << "shift " << to_string(w.shift) << ", m " << (v ? to_double(*v) : 0.0) << ", " << w.iterations
           << " iterations";
}

void sweep_density(Check& c) {
  SweepConfig cfg;
  cfg.form = kMordell49;
  cfg.N = 15;
  cfg.theta_samples = 200;
  cfg.seed = 7;
  SweepResult a = sweep(cfg);
  cfg.N = 19;
  SweepResult b = sweep(cfg);
  double fa = a.summary.case1_fraction, fb = b.summary.case1_fraction;
  double sigma = std::sqrt(fa * (1 - fa) / 200);
  c.require(fa >= 0.9, "Case1 fraction >= 0.9");
  c.require(a.summary.max_gap <= make_rational(1, 20), "max gap <= m/20");
  c.require(fb >= fa - 2 * sigma, "fraction does not drop at N = 19");
  c.detail << "N=15 fraction " << fa << " gap " << to_double(a.summary.max_gap) << "; N=19 fraction " << fb;
}

RatInterval sigma_constraint(const Transform& T, const Rational& theta, long N) {
  auto rp = real_roots(kMordell49);
  Convergent k = convergents(expand(rp.real_roots.front(), N + 1), N).back();
  Real pq(make_rational(k.p, k.q)), p(1L);
  for (std::size_t i = 1; i < rp.real_roots.size(); ++i) p = p * (pq - Real(theta) * T.apply(Real(rp.real_roots[i])));
  return p.enclose(160);
}

void sigma_curve(Check& c) {
  const long N = 12;
  DiagonalInterval D = diagonal_interval(kMordell49, N);
  Rational th = (D.theta_N.mid() + D.right_end.mid()) / 2;
  Real center = sigma_center(kMordell49, N, th);
  SigmaResult id = sigma_solve(kMordell49, N, th, center);
  c.require(id.identity && id.transform.is_rational() &&
                id.transform.rational_entries() == (std::array<Rational, 4>{1, 0, 0, 1}),
            "identity exactly");
  Rational worst_res = 0, worst_dist = 0;
  for (Rational du : {make_rational(1, 1000), make_rational(-1, 1000), make_rational(1, 200), make_rational(-1, 200)}) {
    Real u = center + Real(du);
    SigmaResult r = sigma_solve(kMordell49, N, th, u);
    Rational res = abs(sigma_constraint(r.transform, th, N) - u.enclose(160)).hi;
    Rational dist = r.transform.distance_to_identity(64).hi;
    c.require(res <= Rational(1, 1000000000000L), "residual " + to_string(du));
    c.require(dist < 1, "distance " + to_string(du));
    // fixes rho_1: T(rho_1) - rho_1 vanishes to working precision
    Real rho = Real(real_roots(kMordell49).real_roots.front());
    c.require(abs((r.transform.apply(rho) - rho).enclose(200)).hi < rpow(Rational(2), -150), "fixes rho_1");
    c.require(abs((r.transform.a() * r.transform.d() - r.transform.b() * r.transform.c() - Real(1L)).enclose(200)).hi <
                  rpow(Rational(2), -150),
              "unimodular");
    worst_res = std::max(worst_res, res);
    worst_dist = std::max(worst_dist, dist);
  }
  c.detail << "worst residual " << to_double(worst_res) << ", worst distance " << to_double(worst_dist);
}

void discontinuity(Check& c) {
  long double r = 1.25L;
  for (int i = 0; i < 60; ++i) r -= (r * r * r + r * r - 2 * r - 1) / (3 * r * r + 2 * r - 2);
  // theta* rho_1 = 5/4
  Rational peak = 1 + 2 * (Rational(static_cast<double>(1.25L / r)) - 1);
  auto prof = path_profile(kMordell49, diagonal_path(peak), 41);
  c.require(prof.front().min.exact_value() == Rational(1), "m = 1 at t = 0");
  c.require(prof.back().min.exact_value() == Rational(1), "m = 1 at t = 1");
  Rational lowest = 1;
  std::size_t at = 0;
  for (std::size_t i = 0; i < prof.size(); ++i)
    if (prof[i].min.enclosure.hi < lowest) lowest = prof[i].min.enclosure.hi, at = i;
  c.require(lowest < make_rational(1, 10), "dip below m/10");
  c.require(prof[at].near_rational, "dip flagged near a rational crossing");
  c.detail << "lowest " << to_double(lowest) << " at t=" << to_string(prof[at].t) << " near "
           << prof[at].p.get_str() << "/" << prof[at].q.get_str();
}

struct Criterion {
  const char* name;
  void (*run)(Check&);
};

const Criterion kCriteria[] = {
    {"mordell anchors", mordell_anchors},   {"negative discriminant family", neg_disc},
    {"positive discriminant family", pos_disc}, {"markoff suite", markoff},
    {"cf identities", cf_identities},        {"s-point containment", s_lemma},
    {"structural classification", classification}, {"ael witness", ael},
    {"sweep density", sweep_density},        {"sigma curve", sigma_curve},
    {"discontinuity", discontinuity},
};

}  // namespace

int main(int argc, char** argv) {
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (int i = 0; i < 11; ++i) {
    if (only && only != i + 1) continue;
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      kCriteria[i].run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    std::printf("%s %d %s (%.1fs): %s\n", c.ok ? "PASS" : "FAIL", i + 1, kCriteria[i].name, seconds_since(t0),
                c.detail.str().c_str());
    std::fflush(stdout);
    failed += !c.ok;
  }
  return failed ? 1 : 0;
}
