#include "formspec/dioph.hpp"

#include "formspec/sampling.hpp"

#include <algorithm>

namespace formspec {

void DiophParams::validate() const {
  if (epsilon <= 0 || epsilon > 1) throw PreconditionError("epsilon must lie in (0, 1]");
  if (eta <= 0) throw PreconditionError("eta must be positive");
  if (tau1 <= 0 || tau1 >= 1 || tau2 <= 0 || tau2 >= 1) throw PreconditionError("tau1, tau2 must lie in (0, 1)");
  if (tau2 > tau1) throw PreconditionError("tau2 must not exceed tau1");
  if (height < 1) throw PreconditionError("height must be >= 1");
  if (depth < 1) throw PreconditionError("depth must be >= 1");
}

namespace {

bool is_zero(const Real& v) {
  auto q = v.exact_rational();
  return q && *q == 0;
}

Ordering safe_compare(const Real& a, const Real& b) {
  try {
    return compare(a, b, 1L << 11);
  } catch (const UnresolvedError&) {
    return Ordering::equal;
  }
}

// Enclosure of Y^-(2+eta).
RatInterval inv_pow(const Integer& Y, const Rational& eta, long bits) {
  const Integer& a = eta.get_num();
  const Integer& b = eta.get_den();
  Integer e = 2 * b + a;
  RatInterval p(Rational(ipow(Y, e.get_ui())));
  if (b != 1) p = nth_root(p, static_cast<unsigned>(b.get_ui()), bits + 2 * bit_length(Y) * 3);
  return RatInterval(Rational(1) / p.hi, Rational(1) / p.lo);
}

// 1 when |d| < factor * Y^-(2+eta) surely, 0 when surely not, -1 undecided.
int below(const Real& d, const Integer& Y, const Rational& eta, const Rational& factor) {
  if (is_zero(d)) return 1;
  for (long bits = 64; bits <= 2048; bits *= 2) {
    long extra = 4 * bit_length(Y);
    RatInterval D = d.enclose(bits + extra);
    RatInterval B = inv_pow(Y, eta, bits + extra);
    B = RatInterval(B.lo * factor, B.hi * factor);
    if (D.mag_hi() < B.lo) return 1;
    if (D.mag_lo() >= B.hi) return 0;
  }
  return -1;
}

// Y^eta <= 2
bool small_height(const Integer& Y, const Rational& eta) {
  return ipow(Y, eta.get_num().get_ui()) <= ipow(Integer(2), eta.get_den().get_ui());
}

bool b_eps_with(const Real& x, const RootMinResult& mr, const Rational& eps, int n, long depth) {
  if (is_zero(mr.value)) return true;
  if (x.exact_rational()) return false;
  RootMinResult mx = m_rho(x, n, depth);
  if (is_zero(mx.value)) return false;
  return safe_compare(mx.value, Real(1 - eps) * mr.value) == Ordering::greater;
}

struct Conv {
  std::vector<Integer> p, q;  // index k stored at k + 2, so k = -2, -1 are available
  Integer P(long k) const { return p[k + 2]; }
  Integer Q(long k) const { return q[k + 2]; }
};

Conv conv_table(const CFExpansion& cf, long upto) {
  Conv c;
  c.p = {0, 1};
  c.q = {1, 0};
  for (long k = 0; k <= upto; ++k) {
    if (!cf.has_digit(k)) break;
    Integer a = cf.digit(k);
    c.p.push_back(a * c.p[k + 1] + c.p[k]);
    c.q.push_back(a * c.q[k + 1] + c.q[k]);
  }
  return c;
}

Rational frac(const Integer& a, const Integer& b) { return make_rational(a, b); }

// Digits of a rational until the denominator passes `qmax`, for sampling.
QuadraticReal ones_completion(const Rational& x, const Integer& qmax) {
  CFExpansion cf = expand(x);
  Integer a0 = cf.digit(0);
  std::vector<Integer> digits;
  Integer q1 = 1, q2 = 0;
  for (long k = 1; cf.has_digit(k); ++k) {
    Integer a = cf.digit(k);
    Integer q = a * q1 + q2;
    if (q > qmax) break;
    digits.push_back(a);
    q2 = q1;
    q1 = q;
  }
  return assemble(a0, digits, {Integer(1)});
}

ExpandOptions huge_ok() {
  ExpandOptions o;
  o.allow_huge_digits = true;
  return o;
}

}  // namespace

// ----------------------------------------------------------------- E^eta

bool in_E_eta(const Real& x, const Real& rho, const Rational& eta, const Integer& H) {
  if (eta <= 0) throw PreconditionError("eta must be positive");
  if (H < 1) throw PreconditionError("height must be >= 1");
  auto ok = [&](const Integer& X, const Integer& Y) {
    Rational r = frac(X, Y);
    int premise = below(Real(r) - x, Y, eta, Rational(1));
    if (premise == 0) return true;
    return below(Real(r) - rho, Y, eta, Rational(2)) == 1;
  };
  Integer Y = 1;
  for (; Y <= H && small_height(Y, eta); ++Y) {
    Integer X = floor(Real(Rational(Y)) * x);
    if (!ok(X, Y) || !ok(X + 1, Y)) return false;
  }
  const Integer scanned = Y - 1;
  // |X/Y - x| < Y^-(2+eta) <= 1/(2Y^2) from here on, so X/Y in lowest terms
  // is a convergent of x.
  CFExpansion cf = expand(x, 0, huge_ok());
  Integer p1 = 1, q1 = 0, p2 = 0, q2 = 1;
  for (long k = 0; cf.has_digit(k); ++k) {
    Integer a = cf.digit(k);
    Integer p = a * p1 + p2, q = a * q1 + q2;
    if (q > H) break;
    for (Integer m = 1; m * q <= H; ++m) {
      Integer X = m * p, Yk = m * q;
      if (Yk <= scanned) continue;
      Rational r = frac(p, q);
      int premise = below(Real(r) - x, Yk, eta, Rational(1));
      if (premise == 0) break;  // the bound only shrinks with m
      if (below(Real(r) - rho, Yk, eta, Rational(2)) != 1) return false;
    }
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
  }
  return true;
}

// ----------------------------------------------------------------- B_eps

bool in_B_eps(const Real& x, const Real& rho, const Rational& eps, int n, long depth) {
  if (eps <= 0 || eps > 1) throw PreconditionError("eps must lie in (0, 1]");
  return b_eps_with(x, m_rho(rho, n, depth), eps, n, depth);
}

// ----------------------------------------------------------------- S-points

SWindow s_window(const Real& rho, const Rational& eps, long N, const Integer& h, int n, long depth) {
  if (eps <= 0 || eps >= 1) throw PreconditionError("eps must lie in (0, 1)");
  if (N < 1) throw PreconditionError("N must be >= 1");
  if (h < 1) throw PreconditionError("h must be >= 1");
  if (depth <= 0) depth = std::max(30L, N + 10);
  CFExpansion cf = expand(rho, 0, huge_ok());
  if (!cf.has_digit(N)) throw PreconditionError("rho has no digit at index " + std::to_string(N));
  Integer alpha = cf.digit(N);
  Conv c = conv_table(cf, N - 1);
  Integer hi = floor_of((1 + eps) * Rational(alpha));
  RootMinResult mr = m_rho(rho, n, depth);
  if (!is_zero(mr.value)) {
    Rational m_up = mr.enclosure.hi;
    Rational first = (Rational(ipow(c.Q(N - 1), n - 2)) / m_up + 1) / (1 - eps) - 1;
    hi = std::min(hi, floor_of(first));
  }
  return {h, hi};
}

QuadraticReal construct_S_point(const Real& rho, const Rational& eps, long N, const Integer& h, const Rational& eta,
                                int n, long depth) {
  if (eta <= 0) throw PreconditionError("eta must be positive");
  SWindow w = s_window(rho, eps, N, h, n, depth);
  std::string win = "[" + to_string(w.lo) + ", " + to_string(w.hi) + "]";
  if (w.lo > w.hi) throw PreconditionError("empty digit window " + win + " at index " + std::to_string(N));
  Integer alpha = expand(rho, N, huge_ok()).digit(N);
  if (h > alpha) throw PreconditionError("h exceeds alpha_N = " + to_string(alpha) + " (window " + win + ")");
  CFExpansion cf = expand(rho, N, huge_ok());
  std::vector<Integer> prefix;
  for (long i = 1; i < N; ++i) prefix.push_back(cf.digit(i));
  prefix.push_back(w.lo);
  return assemble(cf.digit(0), prefix, {Integer(1)});
}

// ----------------------------------------------------------------- cutting

Rational cutting_density_estimate(const Integer& a0, const std::vector<Integer>& prefix, const Rational& eta,
                                  long samples, std::uint64_t seed, long max_checks) {
  if (samples < 1) throw PreconditionError("samples must be >= 1");
  if (eta <= 0) throw PreconditionError("eta must be positive");
  for (const auto& a : prefix)
    if (a < 1) throw PreconditionError("prefix digits must be >= 1");
  Integer p1 = a0, q1 = 1, p2 = 1, q2 = 0;
  for (const auto& a : prefix) {
    Integer p = a * p1 + p2, q = a * q1 + q2;
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
  }
  const Integer QN = q1;
  Rational e1 = frac(p1, q1), e2 = frac(p1 + p2, q1 + q2);
  Rational lo = std::min(e1, e2), hi = std::max(e1, e2);
  const unsigned long en = eta.get_num().get_ui(), ed = eta.get_den().get_ui();
  const Integer limit = QN * QN * (Integer(1) << 50);
  long good = 0;
  for (long k = 0; k < samples; ++k) {
    Rational x = sample_in(lo, hi, seed, static_cast<std::uint64_t>(k));
    Rational den = Rational(q1) * x - Rational(p1);
    if (den == 0) {
      ++good;
      continue;
    }
    Rational z = (Rational(p2) - Rational(q2) * x) / den;  // a_{N+1}(x)
    bool pass = true;
    Integer Qa = q1, Qb = q2;  // Q_{N+i}, Q_{N+i-1}
    for (long i = 0; i < max_checks && Qa * Qa < limit; ++i) {
      Integer a = floor_of(z);
      if (ipow(a, ed) >= ipow(Qa, en)) {
        pass = false;
        break;
      }
      Rational f = z - Rational(a);
      if (f == 0) break;
      z = 1 / f;
      Integer Qn = a * Qa + Qb;
      Qb = Qa;
      Qa = Qn;
    }
    if (pass) ++good;
  }
  return make_rational(Integer(good), Integer(samples));
}

// ----------------------------------------------------------------- classify

namespace {

struct Classifier {
  const Real& rho;
  const DiophParams& prm;
  int n;
  CFExpansion cf;
  RootMinResult mr;
  bool rational;

  Classifier(const Real& r, const DiophParams& p, int deg)
      : rho(r), prm(p), n(deg), cf(expand(r, 0, huge_ok())), mr(m_rho(r, deg, p.depth)),
        rational(r.exact_rational().has_value()) {}

  Conv table(long upto) const { return conv_table(cf, upto); }

  // Interval of points sharing rho's digits 0..k.
  RatInterval cylinder(const Conv& c, long k) const {
    Rational a = frac(c.P(k), c.Q(k)), b = frac(c.P(k) + c.P(k - 1), c.Q(k) + c.Q(k - 1));
    return RatInterval(std::min(a, b), std::max(a, b));
  }

  // Largest m with J inside the m-th cylinder (-1 when none).
  long depth_of(const RatInterval& J, Conv& c) const {
    long m = -1;
    for (long k = 0; k < 4096; ++k) {
      if (!cf.has_digit(k)) break;
      if (static_cast<long>(c.p.size()) < k + 3) c = table(k + 64);
      if (!cylinder(c, k).contains(J)) break;
      m = k;
    }
    return m;
  }

  // tail value a_{m+1}(x) and its inverse
  static std::optional<Rational> tail(const Conv& c, long m, const Rational& x) {
    Rational den = Rational(c.Q(m)) * x - Rational(c.P(m));
    if (den == 0) return std::nullopt;
    return (Rational(c.P(m - 1)) - Rational(c.Q(m - 1)) * x) / den;
  }
  static Rational untail(const Conv& c, long m, const Rational& t) {
    return (Rational(c.P(m)) * t + Rational(c.P(m - 1))) / (Rational(c.Q(m)) * t + Rational(c.Q(m - 1)));
  }

  struct Image {
    long m;
    Integer lo;
    std::optional<Integer> hi;  // nullopt: unbounded
  };

  Image image(const RatInterval& J, Conv& c) const {
    long m = depth_of(J, c);
    if (static_cast<long>(c.p.size()) < m + 4) c = table(m + 64);
    auto ta = tail(c, m, J.lo), tb = tail(c, m, J.hi);
    Image im{m, 0, std::nullopt};
    if (!ta || !tb) {
      im.lo = floor_of(ta ? *ta : *tb);
      return im;
    }
    Rational tmin = std::min(*ta, *tb), tmax = std::max(*ta, *tb);
    im.lo = floor_of(tmin);
    Integer top = floor_of(tmax);
    if (Rational(top) == tmax && top > im.lo) top -= 1;
    im.hi = top;
    return im;
  }

  // Digit-window subinterval of J around rho at J's first free index.
  RatInterval window_sub(const RatInterval& J, Conv& c, std::string& note) const {
    Image im = image(J, c);
    long N0 = im.m + 1;
    Integer alpha = cf.digit(N0);
    Integer h = std::min(im.lo, alpha);
    Integer W = floor_of((1 + prm.epsilon) * Rational(alpha));
    if (!is_zero(mr.value) && prm.epsilon < 1) {
      Rational first = (Rational(ipow(c.Q(N0 - 1), n - 2)) / mr.enclosure.hi + 1) / (1 - prm.epsilon) - 1;
      W = std::min(W, floor_of(first));
    }
    if (im.hi) W = std::min(W, *im.hi);
    if (W < alpha) {
      h = alpha;
      W = alpha;
      note += "window below rho's digit, using its cylinder; ";
    }
    Rational a = untail(c, im.m, Rational(h)), b = untail(c, im.m, Rational(W + 1));
    RatInterval sub(std::min(a, b), std::max(a, b));
    note += "digit window [" + to_string(h) + ", " + to_string(W) + "] at index " + std::to_string(N0) + "; ";
    return intersect(sub, J);
  }
};

}  // namespace

ClassifiedInterval structural_classify(const Real& rho, const RatInterval& iv, const DiophParams& params, int n,
                                       long samples, std::uint64_t seed) {
  params.validate();
  if (samples < 1) throw PreconditionError("samples must be >= 1");
  RatInterval re = rho.enclose(256);
  if (!(iv.lo <= re.lo && re.hi <= iv.hi)) {
    bool outside = re.hi < iv.lo || re.lo > iv.hi;
    if (outside || !(compare(rho, Real(iv.lo)) != Ordering::less && compare(rho, Real(iv.hi)) != Ordering::greater))
      throw PreconditionError("rho is not in the interval " + to_string(iv));
  }
  if (iv.lo == iv.hi) throw PreconditionError("interval must have positive length");
  Classifier K(rho, params, n);
  ClassifiedInterval out;
  out.interval = iv;
  out.sample_count = samples;

  const Integer qmax = Integer(1) << 24;
  long good = 0;
  for (long k = 0; k < samples; ++k) {
    Rational x = sample_in(iv.lo, iv.hi, seed, static_cast<std::uint64_t>(k));
    Real xt(ones_completion(x, qmax));
    if (b_eps_with(xt, K.mr, params.epsilon, n, params.depth) && in_E_eta(xt, rho, params.eta, params.height)) ++good;
  }
  out.density_estimate = make_rational(Integer(good), Integer(samples));

  if (K.rational) {
    out.kind = ClassifiedInterval::Kind::TypeI;
    out.note = "rational rho: B_eps is everything";
    return out;
  }
  Conv c = K.table(64);
  Classifier::Image im = K.image(iv, c);
  out.n0 = im.m + 1;
  out.digit_values = im.hi ? Integer(*im.hi - im.lo + 1).get_si() : -1;
  if (out.density_estimate >= 1 - params.tau1) {
    out.kind = ClassifiedInterval::Kind::TypeI;
    out.note = "sampled density above 1 - tau1";
    return out;
  }
  out.kind = ClassifiedInterval::Kind::TypeII;
  std::string note;
  RatInterval sub;
  if (out.digit_values != 2) {
    note = "case I: ";
    sub = K.window_sub(iv, c, note);
  } else {
    note = "case II: ";
    // rho need not be an endpoint: split its digit class at rho and keep the
    // longer piece. Towards [alpha_0, ..., alpha_N0, infinity] the next digit
    // is at least s = alpha_{N0+1}.
    long N0 = out.n0;
    Integer alpha = K.cf.digit(N0);
    Rational ea = Classifier::untail(c, im.m, Rational(alpha)), eb = Classifier::untail(c, im.m, Rational(alpha + 1));
    auto piece = [&](const Rational& e) {
      RatInterval S(std::min(re.lo, e), std::max(re.hi, e));
      return overlaps(S, iv) ? intersect(S, iv) : RatInterval(re);
    };
    RatInterval A = piece(ea), B = piece(eb);
    RatInterval J = A.width() >= B.width() ? A : B;
    note += "s = " + to_string(K.cf.digit(N0 + 1)) + (A.width() >= B.width() ? ", deep side; " : ", shallow side; ");
    sub = K.window_sub(J, c, note);
  }
  out.subinterval = sub;
  out.C = (sub.width() / iv.width()) / (params.tau1 * params.epsilon);
  out.note = note;
  return out;
}

// ----------------------------------------------------------------- AEL

namespace {

std::vector<Real> form_real_roots(const BinaryForm& f) {
  std::vector<Real> roots;
  for (const auto& r : real_roots(f).real_roots) roots.push_back(root_as_real(r));
  return roots;
}

bool witness_check(const BinaryForm& f, const std::vector<Real>& roots, const std::vector<RootMinResult>& mrs,
                   const Real& target, const Transform& T, const DiophParams& p, AelWitness* out) {
  const int n = f.degree();
  if (T.distance_to_identity().hi > p.epsilon) return false;
  std::vector<RatInterval> lows;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Real x = T.apply(roots[i]);
    if (!b_eps_with(x, mrs[i], p.epsilon, n, p.depth)) return false;
    if (!in_E_eta(x, roots[i], p.eta, p.height)) return false;
    lows.push_back(m_rho(x, n, p.depth).enclosure);
  }
  MinResult m = m_estimate(act(f, T));
  if (safe_compare(m.value, target) == Ordering::less) return false;
  if (out) {
    out->transform = T;
    out->epsilon = p.epsilon;
    out->per_root_lower_bounds = std::move(lows);
    out->minimum = m;
  }
  return true;
}

}  // namespace

bool is_ael_witness(const BinaryForm& f, const Transform& T, const DiophParams& params, AelWitness* out) {
  params.validate();
  auto roots = form_real_roots(f);
  std::vector<RootMinResult> mrs;
  for (const auto& r : roots) mrs.push_back(m_rho(r, f.degree(), params.depth));
  Real target = Real(1 - params.epsilon) * m_estimate(f).value;
  return witness_check(f, roots, mrs, target, T, params, out);
}

AelWitness ael_search(const BinaryForm& f, const Rational& eps, const DiophParams& params0, std::uint64_t seed,
                      long budget) {
  DiophParams p = params0;
  p.epsilon = eps;
  p.validate();
  if (discriminant(f) == 0) throw PreconditionError("form has a repeated root (zero discriminant)");
  auto roots = form_real_roots(f);
  if (roots.empty()) throw PreconditionError("form has no real root");
  const int n = f.degree();
  std::vector<RootMinResult> mrs;
  for (const auto& r : roots) mrs.push_back(m_rho(r, n, p.depth));
  Real target = Real(1 - eps) * m_estimate(f).value;

  std::vector<RatInterval> renc;
  for (const auto& r : roots) renc.push_back(r.enclose(200));
  Rational w = std::min(Rational(eps / 2), make_rational(1, 8));
  for (std::size_t i = 0; i + 1 < renc.size(); ++i) w = std::min(w, Rational((renc[i].lo - renc[i + 1].hi) / 4));
  RatInterval off(-w, w);  // admissible shifts

  AelWitness wit;
  wit.epsilon = eps;
  long iters = 0;
  const int max_passes = 8;
  for (int pass = 0; pass < max_passes; ++pass) {
    bool shrunk = false;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (++iters > budget) throw BudgetError("budget exhausted after " + std::to_string(budget) + " iterations");
      RatInterval J(renc[i].lo + off.lo, renc[i].hi + off.hi);
      ClassifiedInterval cl = structural_classify(roots[i], J, p, n, 48, seed + 1000003ULL * pass + i);
      wit.interval_trace.push_back(cl);
      if (cl.kind == ClassifiedInterval::Kind::TypeII) {
        RatInterval s(cl.subinterval->lo - renc[i].lo, cl.subinterval->hi - renc[i].hi);
        if (s.lo < 0 && s.hi > 0 && s.width() < off.width()) {
          off = intersect(off, s);
          shrunk = true;
        }
      }
    }
    if (!shrunk) break;
  }
  // short dyadic ends keep the shifts readable
  RatInterval inner(round_up(off.lo, 48), round_down(off.hi, 48));
  if (inner.lo < 0 && inner.hi > 0) off = inner;
  for (std::uint64_t k = 0;; ++k) {
    if (++iters > budget)
      throw BudgetError("budget exhausted after " + std::to_string(budget) + " iterations; " +
                        std::to_string(wit.interval_trace.size()) + " classifications, shift interval " +
                        to_string(off));
    Rational s = sample_in(off.lo, off.hi, seed ^ 0x5bd1e995ULL, k);
    if (s == 0) continue;
    Transform T = Transform::rational(Rational(1), s, Rational(0), Rational(1));
    if (witness_check(f, roots, mrs, target, T, p, &wit)) {
      wit.shift = s;
      wit.iterations = iters;
      return wit;
    }
  }
}

}  // namespace formspec
