#include "formspec/spectrum.hpp"

#include "formspec/cf.hpp"
#include "formspec/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

namespace formspec {

namespace {

// fn(i) for i in [0, n) over k threads; results are indexed so the merge
// does not depend on scheduling.
template <class F>
void parallel_for(long n, unsigned threads, F&& fn) {
  unsigned k = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  k = static_cast<unsigned>(std::min<long>(k, std::max(1L, n)));
  std::atomic<long> next{0};
  std::vector<std::exception_ptr> errs(k);
  auto work = [&](unsigned w) {
    try {
      for (long i; (i = next++) < n;) fn(i);
    } catch (...) {
      errs[w] = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> th;
  for (unsigned w = 1; w < k; ++w) th.emplace_back(work, w);
  work(0);
  for (auto& t : th) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

std::shared_ptr<const NumberField> field_of_largest_root(const IntPolynomial& p) {
  auto roots = isolate_real_roots(p);
  return std::make_shared<const NumberField>(roots.back());
}

std::shared_ptr<const NumberField> plastic_field() {
  static const auto k = field_of_largest_root(IntPolynomial({-1, -1, 0, 1}));
  return k;
}

// log2 |q|, good to double precision whatever the size.
double log2_abs(const Integer& z) {
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log2(std::fabs(m)) + e;
}

double log2_abs(const Rational& q) {
  if (q == 0) return -INFINITY;
  return log2_abs(Integer(q.get_num())) - log2_abs(Integer(q.get_den()));
}

Rational ld_to_rational(long double v) {
  int e = 0;
  long double m = std::frexp(v, &e);
  auto mant = static_cast<long long>(std::ldexp(m, 63));
  Rational r{Integer(std::to_string(mant))};
  return r * rpow(Rational(2), e - 63);
}

Convergent convergent_at(const Real& rho, long N) {
  CFExpansion cf = expand(rho, N + 1, ExpandOptions{Integer(1000000), true});
  if (!cf.has_digit(N)) throw PreconditionError("root is rational with fewer than " + std::to_string(N + 1) + " digits");
  return convergents(cf, N).back();
}

// Largest real root, required positive.
Real largest_root(const BinaryForm& f) {
  if (discriminant(f) == 0) throw PreconditionError("zero discriminant");
  auto rp = real_roots(f);
  if (rp.real_roots.empty()) throw PreconditionError("form has no real root");
  Real r = root_as_real(rp.real_roots.front());
  if (r.sign() <= 0) throw PreconditionError("largest real root is not positive");
  return r;
}

}  // namespace

RealForm neg_disc_family(const Rational& t) {
  if (t < 0) throw PreconditionError("neg-disc family needs t >= 0");
  auto k = plastic_field();
  FieldElement r = FieldElement::generator(k);
  FieldElement r2 = r * r;
  FieldElement q = make_rational(1, 4) * r2 + Rational(1 + t * t) * (make_rational(3, 4) * r2 - FieldElement(k, 1));
  RealForm f = RealForm::factored(Real(1L), {Real(r)}, {{Real(r), Real(q)}});
  FormHints h;
  h.global_lower = Rational(1);
  h.note = "pointwise above x^3 - x y^2 - y^3";
  return f.with_hints(std::move(h));
}

const CyclicCubic& cyclic_cubic() {
  static const CyclicCubic c = [] {
    CyclicCubic c;
    c.field = field_of_largest_root(IntPolynomial({-1, -2, 1, 1}));
    c.rho = FieldElement::generator(c.field);
    FieldElement one(c.field, 1);
    c.chi = c.rho * c.rho - Rational(2) * one;
    c.psi = one - c.rho - c.rho * c.rho;
    return c;
  }();
  return c;
}

PosDiscFamily pos_disc_family(const Rational& c, long N) {
  if (c < 1) throw PreconditionError("pos-disc family needs c >= 1");
  if (N < 2) throw PreconditionError("pos-disc family needs N >= 2");
  const CyclicCubic& K = cyclic_cubic();
  CFExpansion cf = expand(Real(K.rho), N + 1, ExpandOptions{Integer(1000000), true});
  Integer QN = convergents(cf, N).back().q;
  // exact: the product is irrational, so its floor is decided by sign tests
  FieldElement target = Rational(c * QN) * ((K.rho - K.chi) * (K.rho - K.psi));
  Integer digit = floor(Real(target));
  std::vector<Integer> prefix;
  for (long i = 1; i <= N; ++i) prefix.push_back(cf.digit(i));
  prefix.push_back(digit);
  QuadraticReal r = assemble(cf.digit(0), prefix, {Integer(1)});

  RealForm f = RealForm::factored(Real(1L), {Real(r), Real(K.chi), Real(K.psi)}, {});
  // Off the root r, |f| = |P| |z - r| / |z - rho| with P the integral form of
  // rho, and |P| >= 1 at integer points.
  RatInterval re = Real(r).enclose(256), rhoe = K.rho.enclose(256);
  FormHints h;
  h.near_root_lower = [re, rhoe](std::size_t root, const RatInterval& U) -> std::optional<Rational> {
    if (root == 0) return std::nullopt;
    if ((U - re).contains_zero() || (U - rhoe).contains_zero()) return std::nullopt;
    // a Moebius map without pole or zero on U is monotone there
    Rational lb;
    for (const Rational& z : {U.lo, U.hi}) {
      RatInterval e = RatInterval(z, z);
      Rational v = (e - re).mag_lo() / (e - rhoe).mag_hi();
      lb = z == U.lo ? v : std::min(lb, v);
    }
    return round_down(lb, 128);
  };
  h.note = "ratio to the integral form of rho";
  return {f.with_hints(std::move(h)), r, digit, c, N};
}

Real diagonal_value(const BinaryForm& f, const Rational& theta, const Integer& x, const Integer& y) {
  int n = f.degree();
  Rational v = abs_of(f.eval(Rational(x), theta * Rational(y)));
  Real k = n % 2 == 0 ? Real(rpow(theta, -n / 2)) : Real(rpow(theta, -(n + 1) / 2)) * sqrt(Real(theta));
  return k * Real(v);
}

DiagonalInterval diagonal_interval(const BinaryForm& f, long N, std::optional<Rational> target) {
  if (N < 1) throw PreconditionError("convergent index must be >= 1");
  int n = f.degree();
  DiagonalInterval D;
  D.N = N;
  D.rho1 = largest_root(f);
  Convergent cv = convergent_at(D.rho1, N);
  D.P = cv.p;
  D.Q = cv.q;
  if (D.P <= 0) throw PreconditionError("convergent numerator is not positive");
  if (!target) {
    MinResult m = m_estimate(f);
    target = m.exact_value();
    if (!target) throw PreconditionError("minimum of a rational form is not rational");
  }
  if (*target <= 0) throw PreconditionError("target must be positive");
  D.target = *target;

  long bits = 80 + n * static_cast<long>(bit_length(D.Q));
  D.right_end = (Real(Rational(D.P)) / (Real(Rational(D.Q)) * D.rho1)).enclose(bits);
  D.right_end = round_out(D.right_end, bits);

  // f(P, theta Q)^2 - target^2 theta^n changes sign at theta_N
  const Integer& P = D.P;
  const Integer& Q = D.Q;
  auto h = [&](const Rational& th) -> Rational {
    Rational v = f.eval(Rational(P), th * Rational(Q));
    return v * v - D.target * D.target * rpow(th, n);
  };
  double r1 = D.rho1.approx();
  double dfd = 0;  // f'(rho_1)
  for (int i = 1; i <= n; ++i) dfd += i * to_double(f.coeff(i)) * std::pow(r1, i - 1);
  double est = to_double(D.target) / std::fabs(r1 * dfd) * std::exp2(-n * log2_abs(Q));
  int e = 0;
  std::frexp(est, &e);
  Rational step = rpow(Rational(2), e - 3);  // dyadic, below the expected width

  Rational hi = D.right_end.lo, lo = hi;
  if (h(hi) >= 0) throw PreconditionError("target below the value at the right end");
  bool found = false;
  for (int k = 0; k < 400; ++k) {
    lo = hi - step;
    if (lo <= 0) break;
    if (h(lo) >= 0) {
      found = true;
      break;
    }
    hi = lo;
    step *= 2;
  }
  if (!found) throw PreconditionError("no point with |f o Delta_theta (P_N, Q_N)| = target left of the right end");
  Rational tol = rpow(Rational(2), e - 70);
  while (hi - lo > tol) {
    Rational mid = (lo + hi) / 2;
    (h(mid) >= 0 ? lo : hi) = mid;
  }
  D.theta_N = {lo, hi};
  return D;
}

std::string to_string(SweepCase c) {
  switch (c) {
    case SweepCase::Case1_convergent:
      return "Case1_convergent";
    case SweepCase::Case2_deep:
      return "Case2_deep";
    case SweepCase::Case3_shallow:
      return "Case3_shallow";
    case SweepCase::Case4_crossroot:
      return "Case4_crossroot";
    default:
      return "Unclassified";
  }
}

void SweepConfig::validate() const {
  if (N < 2) throw PreconditionError("sweep needs N >= 2");
  if (theta_samples < 1) throw PreconditionError("sweep needs at least one sample");
  if (depth < 0 || box < 1) throw PreconditionError("sweep needs depth >= 0 and box >= 1");
  if (gap_tolerance <= 0) throw PreconditionError("gap tolerance must be positive");
}

SweepResult sweep(const SweepConfig& cfg) {
  cfg.validate();
  const BinaryForm& f = cfg.form;
  int n = f.degree();
  SweepResult R;
  SweepSummary& S = R.summary;
  S.interval = diagonal_interval(f, cfg.N);
  const DiagonalInterval& D = S.interval;

  double cmax = 0;
  for (const auto& c : f.coeffs()) cmax = std::max(cmax, std::fabs(to_double(c)));
  S.M_hat = 2 * cmax;
  const double lM = std::log2(S.M_hat), lQ = log2_abs(D.Q);

  std::vector<RatInterval> roots;
  for (const auto& r : real_roots(f).real_roots) roots.push_back(root_as_real(r).enclose(256));
  Rational PQ = make_rational(D.P, D.Q);
  Rational rho1 = roots.front().mid();

  Rational lo = D.theta_N.hi, hi = D.right_end.lo;
  MinOptions mo;
  mo.box = cfg.box;
  mo.depth = cfg.depth;
  mo.threads = 1;
  R.points.resize(cfg.theta_samples);
  parallel_for(cfg.theta_samples, cfg.threads, [&](long k) {
    SweepPoint& p = R.points[k];
    p.theta = sample_in(lo, hi, cfg.seed, static_cast<std::uint64_t>(k));
    RealForm g = RealForm(f).act(Transform::diagonal(p.theta));
    p.min_result = m_estimate(g, mo);
    p.spec_value = p.min_result.enclosure;
    if (!p.min_result.attaining) return;
    const auto& [x, y] = *p.min_result.attaining;
    if (x == D.P && y == D.Q) {
      p.kind = SweepCase::Case1_convergent;
      return;
    }
    if (y == 0) return;
    Rational z = make_rational(x, y);
    double ly = log2_abs(y);
    // log2 of |z - w| against a log2 bound
    auto close = [&](const Rational& w, double bound) { return log2_abs(Rational(z - w)) < bound; };
    bool c2 = false, c3 = false, c4 = false;
    if (ly > 1.25 * lQ - lM)
      for (const auto& r : roots) c2 = c2 || close(p.theta * r.mid(), lM - n * ly);
    if (ly < lM + lQ * 5.0 / 7.0)
      for (const auto& r : roots) c3 = c3 || close(r.mid(), lM - 2.8 * ly);
    if (ly < lM + 1.25 * lQ)
      for (std::size_t i = 1; i < roots.size(); ++i)
        c4 = c4 || close(roots[i].mid() / rho1 * PQ, lM - 1.25 * (ly + lQ));
    int hits = c2 + c3 + c4;
    if (hits != 1) return;  // borderline or none
    p.kind = c2 ? SweepCase::Case2_deep : c3 ? SweepCase::Case3_shallow : SweepCase::Case4_crossroot;
  });

  S.samples = cfg.theta_samples;
  for (const auto& p : R.points) {
    S.counts[static_cast<int>(p.kind)]++;
    if (p.kind == SweepCase::Case1_convergent) S.case1_values.push_back(p.spec_value);
  }
  S.case1_fraction = static_cast<double>(S.counts[0]) / S.samples;
  std::sort(S.case1_values.begin(), S.case1_values.end(),
            [](const RatInterval& a, const RatInterval& b) { return a.mid() < b.mid(); });
  Rational tol = cfg.gap_tolerance * D.target;
  Rational prev = 0;
  S.max_gap = 0;
  S.covered = 0;
  for (std::size_t i = 0; i < S.case1_values.size(); ++i) {
    Rational v = S.case1_values[i].mid();
    Rational g = v - prev;
    S.max_gap_with_ends = std::max(S.max_gap_with_ends, g);
    if (i > 0) {
      S.max_gap = std::max(S.max_gap, g);
      if (g <= tol) S.covered += g;
    }
    prev = v;
  }
  S.max_gap_with_ends = std::max(S.max_gap_with_ends, Rational(D.target - prev));
  return R;
}

std::string sweep_csv(const SweepResult& r, int digits) {
  std::string out = "theta_lo,theta_hi,value_lo,value_hi,case,x,y\n";
  for (const auto& p : r.points) {
    std::string x, y;
    if (p.min_result.attaining) {
      x = p.min_result.attaining->first.get_str();
      y = p.min_result.attaining->second.get_str();
    }
    // theta is exact; both ends print the same
    out += to_decimal(p.theta, digits) + "," + to_decimal(p.theta, digits) + "," +
           to_decimal(p.spec_value.lo, digits) + "," + to_decimal(p.spec_value.hi, digits) + "," + to_string(p.kind) +
           "," + x + "," + y + "\n";
  }
  return out;
}

namespace {

struct SigmaSetup {
  std::shared_ptr<const NumberField> field;
  FieldElement rho1;
  std::vector<Real> others;          // rho_2, ...
  std::vector<long double> others_ld;
  long double r1 = 0, pq = 0, theta = 0;
  Rational PQ;
};

SigmaSetup sigma_setup(const BinaryForm& f, long N, const Rational& theta) {
  if (theta <= 0) throw PreconditionError("theta must be positive");
  if (discriminant(f) == 0) throw PreconditionError("zero discriminant");
  auto rp = real_roots(f);
  if (rp.real_count != f.degree()) throw PreconditionError("sigma solve needs a totally real form");
  SigmaSetup s;
  s.field = std::make_shared<const NumberField>(rp.real_roots.front());
  s.rho1 = FieldElement::generator(s.field);
  Real r1 = Real(s.rho1);
  if (r1.sign() <= 0) throw PreconditionError("largest real root is not positive");
  for (std::size_t i = 1; i < rp.real_roots.size(); ++i) {
    s.others.push_back(root_as_real(rp.real_roots[i]));
    s.others_ld.push_back(to_double(s.others.back().enclose(80).mid()));
  }
  Convergent cv = convergent_at(r1, N);
  s.PQ = make_rational(cv.p, cv.q);
  s.r1 = to_double(r1.enclose(80).mid());
  s.pq = to_double(s.PQ);
  s.theta = to_double(theta);
  return s;
}

// Entries of M B M^-1 for B = [[l, m], [0, 1/l]].
std::array<FieldElement, 4> stabilizer(const SigmaSetup& s, const Rational& l, const Rational& m) {
  const FieldElement& r = s.rho1;
  FieldElement one(s.field, 1);
  Rational il = 1 / l;
  return {il * one - m * r, l * r + m * (r * r) - il * r, Rational(-m) * one, l * one + m * r};
}

}  // namespace

Real sigma_center(const BinaryForm& f, long N, const Rational& theta) {
  SigmaSetup s = sigma_setup(f, N, theta);
  Real p(1L);
  for (const auto& r : s.others) p = p * (Real(s.PQ) - Real(theta) * r);
  return p;
}

SigmaResult sigma_solve(const BinaryForm& f, long N, const Rational& theta, const Real& u, const Rational& guard,
                        double tolerance) {
  SigmaSetup s = sigma_setup(f, N, theta);
  Real center(1L), ident(1L);
  for (const auto& r : s.others) {
    center = center * (Real(s.rho1) - r);
    ident = ident * (Real(s.PQ) - Real(theta) * r);
  }
  RatInterval off = abs((u - center).enclose(64));
  if (off.lo > guard)
    throw PreconditionError("u is " + to_decimal(off.mid(), 6) + " away from the center value, guard " +
                            to_string(guard));

  auto residual = [&](const Rational& l, const Rational& m) {
    auto e = stabilizer(s, l, m);
    Real a(e[0]), b(e[1]), c(e[2]), d(e[3]);
    Real p(1L);
    for (const auto& r : s.others) p = p * (Real(s.PQ) - Real(theta) * ((a * r + b) / (c * r + d)));
    return (p - u).enclose(128);
  };

  SigmaResult out;
  RatInterval r0 = residual(1, 0);
  if (abs(r0).hi <= Rational(tolerance)) {
    // identity already solves it (exactly when u is the identity value)
    out.identity = true;
    out.residual = r0;
    out.distance = {0, 0};
    return out;
  }

  // min-norm damped Gauss-Newton in the two stabilizer parameters
  long double ut = to_double(u.enclose(80).mid());
  auto F = [&](long double l, long double m) {
    long double a = 1 / l - s.r1 * m, b = s.r1 * l + s.r1 * s.r1 * m - s.r1 / l, c = -m, d = l + m * s.r1;
    long double p = 1;
    for (long double r : s.others_ld) p *= s.pq - s.theta * (a * r + b) / (c * r + d);
    return p - ut;
  };
  long double l = 1, m = 0, fv = F(l, m);
  long it = 0;
  const long double h = 1e-8L;
  for (; it < 200 && std::fabs(fv) > 1e-17L; ++it) {
    long double gl = (F(l + h, m) - F(l - h, m)) / (2 * h), gm = (F(l, m + h) - F(l, m - h)) / (2 * h);
    long double g2 = gl * gl + gm * gm;
    if (g2 == 0) break;
    long double step = 1;
    bool moved = false;
    for (int k = 0; k < 40; ++k, step /= 2) {
      long double nl = l - step * fv * gl / g2, nm = m - step * fv * gm / g2;
      long double nf = F(nl, nm);
      if (std::fabs(nf) < std::fabs(fv)) {
        l = nl, m = nm, fv = nf, moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  Rational L = ld_to_rational(l), Mu = ld_to_rational(m);
  RatInterval res = residual(L, Mu);
  // polish in exact arithmetic along mu
  for (int k = 0; k < 4 && abs(res).hi > Rational(tolerance * 1e-6); ++k) {
    Rational dm = rpow(Rational(2), -40);
    RatInterval r2 = residual(L, Mu + dm);
    Rational slope = (r2.mid() - res.mid()) / dm;
    if (slope == 0) break;
    Mu -= res.mid() / slope;
    res = residual(L, Mu);
  }
  out.lambda = L;
  out.mu = Mu;
  out.iterations = it;
  out.residual = res;
  auto e = stabilizer(s, L, Mu);
  out.transform = Transform::real(Real(e[0]), Real(e[1]), Real(e[2]), Real(e[3]));
  out.distance = out.transform.distance_to_identity(64);
  if (abs(res).hi > Rational(tolerance) || !(out.distance.hi < 1))
    throw PreconditionError("no solution in the unit ball: residual " + to_decimal(abs(res).hi, 6) +
                            ", distance " + to_decimal(out.distance.hi, 6));
  return out;
}

TransformPath diagonal_path(const Rational& peak) {
  if (peak <= 0) throw PreconditionError("peak must be positive");
  return [peak](const Rational& t) { return Transform::diagonal(1 + 4 * (peak - 1) * t * (1 - t)); };
}

std::vector<ProfilePoint> path_profile(const BinaryForm& f, const TransformPath& path, long samples,
                                       const MinOptions& opt, double threshold, long qmax, unsigned threads) {
  if (samples < 2) throw PreconditionError("profile needs at least two samples");
  if (discriminant(f) == 0) throw PreconditionError("zero discriminant");
  auto rp = real_roots(f);
  if (rp.real_count != f.degree()) throw PreconditionError("profile needs a totally real form");
  std::vector<Real> roots;
  for (const auto& r : rp.real_roots) roots.push_back(root_as_real(r));
  const int n = f.degree();
  MinOptions mo = opt;
  mo.threads = 1;
  std::vector<ProfilePoint> out(samples);
  parallel_for(samples, threads, [&](long k) {
    ProfilePoint& p = out[k];
    p.t = make_rational(k, samples - 1);
    Transform T = path(p.t);
    p.min = m_estimate(RealForm(f).act(T), mo);
    p.nearest = INFINITY;
    for (const auto& r : roots) {
      Real z = T.apply(r);
      CFExpansion cf = expand(z, 0, ExpandOptions{Integer(1000000), true});
      double zd = z.approx();
      for (long i = 0; cf.has_digit(i); ++i) {
        Convergent c = convergents(cf, i).back();
        if (c.q > qmax) break;
        double d = std::fabs(zd - to_double(make_rational(c.p, c.q))) * std::pow(to_double(Rational(c.q)), n);
        if (d < p.nearest) {
          p.nearest = d;
          p.p = c.p;
          p.q = c.q;
        }
      }
    }
    p.near_rational = p.nearest < threshold;
  });
  return out;
}

std::vector<MarkoffEntry> markoff_triples(const Integer& bound) {
  if (bound < 1) throw PreconditionError("markoff bound must be >= 1");
  std::set<MarkoffTriple> seen;
  std::vector<MarkoffTriple> todo{{1, 1, 1}};
  seen.insert(todo.front());
  while (!todo.empty()) {
    MarkoffTriple t = todo.back();
    todo.pop_back();
    Integer v[3] = {t.x, t.y, t.z};
    for (int i = 0; i < 3; ++i) {
      Integer w[3] = {v[0], v[1], v[2]};
      w[i] = 3 * w[(i + 1) % 3] * w[(i + 2) % 3] - w[i];
      std::sort(w, w + 3);
      if (w[0] < 1 || w[2] > bound) continue;
      MarkoffTriple nt{w[0], w[1], w[2]};
      if (seen.insert(nt).second) todo.push_back(nt);
    }
  }
  std::vector<MarkoffTriple> ts(seen.begin(), seen.end());
  std::sort(ts.begin(), ts.end(), [](const MarkoffTriple& a, const MarkoffTriple& b) {
    return std::tie(a.z, a.x, a.y) < std::tie(b.z, b.x, b.y);
  });
  std::vector<MarkoffEntry> out;
  for (const auto& t : ts) {
    Integer d = 9 * t.z * t.z - 4;
    QuadraticReal v(Integer(0), t.z, d, d);
    out.push_back({t, v, Real(v).enclose(128)});
  }
  return out;
}

FreimanConstant freiman_constant(long bits) {
  QuadraticReal closed(Integer(2221564096), Integer(283748), Integer(462), Integer(491993569));
  QuadraticReal v = QuadraticReal(Rational(1)) / closed;
  return {v, Real(v).enclose(bits)};
}

}  // namespace formspec
