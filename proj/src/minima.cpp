#include "formspec/minima.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace formspec {

Point normalize(const Point& p) {
  if (p.second < 0 || (p.second == 0 && p.first < 0)) return {Integer(-p.first), Integer(-p.second)};
  return p;
}

bool tie_less(const Point& a0, const Point& b0) {
  Point a = normalize(a0), b = normalize(b0);
  if (a.second != b.second) return a.second < b.second;
  Integer ax = abs(a.first), bx = abs(b.first);
  if (ax != bx) return ax < bx;
  return a.first > b.first;
}

namespace {

using i128 = __int128;

unsigned worker_count(unsigned t) {
  if (t) return t;
  unsigned h = std::thread::hardware_concurrency();
  return h ? std::min(h, 16u) : 4u;
}

// Runs fn(w) for w in [0, k) on k threads and rethrows the first failure.
template <class F>
void run_workers(unsigned k, F&& fn) {
  std::vector<std::exception_ptr> errs(k);
  std::vector<std::thread> th;
  for (unsigned w = 1; w < k; ++w)
    th.emplace_back([&, w] {
      try {
        fn(w);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  try {
    fn(0);
  } catch (...) {
    errs[0] = std::current_exception();
  }
  for (auto& t : th) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

Ordering safe_compare(const Real& a, const Real& b) {
  try {
    return compare(a, b, 1L << 11);
  } catch (const UnresolvedError&) {
    return Ordering::equal;  // indistinguishable below 2^-2048
  }
}

i128 to_i128(const Integer& z) {
  // |z| < 2^126 by the caller's bound check
  Integer a = abs(z);
  Integer hi = a >> 64, lo = a - (hi << 64);
  i128 v = (static_cast<i128>(hi.get_ui()) << 64) | static_cast<i128>(mpz_get_ui(lo.get_mpz_t()));
  return z < 0 ? -v : v;
}

Integer from_i128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 a = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(a >> 64)), lo(static_cast<unsigned long>(a & ~0ULL));
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

struct Approx {
  long double a, e;  // | |f| - a | <= e
  bool ok = true;
};

// Evaluation strategy for one real form. Exact forms reduce to integer
// arithmetic; the others use floating filters followed by exact comparison.
class Model {
 public:
  explicit Model(const RealForm& f) : f_(f), n(f.degree()) {
    if (f.inner()) {
      exact = true;
      const BinaryForm& g = *f.inner();
      Integer L = g.denominator_lcm();
      for (const auto& c : g.coeffs()) {
        Rational v = c * L;
        G.push_back(v.get_num());
      }
      content = 0;
      for (const auto& c : G) content = gcd(content, c);
      Real o = f.outer();
      if (o.sign() < 0) o = -o;
      scale = o * Real(make_rational(Integer(1), L));
      return;
    }
    if (f.is_factored()) {
      factored = true;
      Real s = f.outer() * f.scale();
      fscale = std::fabs(static_cast<long double>(s.approx()));
      for (const auto& r : f.linear_roots()) {
        Rational m = r.enclose(140).mid();
        double hi = to_double(m);
        double lo = to_double(m - Rational(hi));
        roots.emplace_back(hi, lo);
      }
      for (const auto& [p, q] : f.quad_factors())
        quads.emplace_back(static_cast<long double>(p.approx()), static_cast<long double>(q.approx()));
      return;
    }
    for (const auto& c : f.coefficients()) coeffs.push_back(static_cast<long double>(to_double(c.enclose(80).mid())));
  }

  const RealForm& form() const { return f_; }

  Integer G_at(const Integer& x, const Integer& y) const {
    Integer acc = 0;
    // sum G_i x^i y^(n-i), Horner in x with y powers
    std::vector<Integer> ypow(n + 1);
    ypow[0] = 1;
    for (int i = 1; i <= n; ++i) ypow[i] = ypow[i - 1] * y;
    for (int i = n; i >= 0; --i) acc = acc * x + G[i] * ypow[n - i];
    return acc;
  }

  // |f(x, y)| exactly.
  Real value(const Integer& x, const Integer& y) const {
    if (exact) return scale * Real(Rational(abs(G_at(x, y))));
    int s = f_.sign_at(x, y);
    if (s == 0) return Real(0L);
    Real v = f_.value(x, y);
    return s < 0 ? -v : v;
  }

  Approx approx(long long x, long long y) const {
    const long double eps = std::ldexp(1.0L, -52);
    if (factored) {
      long double v = fscale, rel = std::ldexp(1.0L, -56);
      for (const auto& [rh, rl] : roots) {
        double t = std::fma(-rh, static_cast<double>(y), static_cast<double>(x));
        double u = t - rl * static_cast<double>(y);
        long double au = std::fabs(static_cast<long double>(u));
        if (au == 0) return {0, 0, false};
        rel += 2 * eps + std::fabs(static_cast<long double>(y) * rh) * std::ldexp(1.0L, -100) / au;
        v *= au;
      }
      for (const auto& [p, q] : quads) {
        long double X = x, Y = y;
        long double w = X * X + p * X * Y + q * Y * Y;
        long double err = (X * X + std::fabs(p * X * Y) + std::fabs(q) * Y * Y) * std::ldexp(1.0L, -58);
        if (w <= 0) return {0, 0, false};
        rel += err / w;
        v *= w;
      }
      if (rel > 1e-6L) return {0, 0, false};
      return {v, v * rel * 2};
    }
    long double X = x, Y = y, acc = 0, mag = 0;
    std::vector<long double> yp(n + 1);
    yp[0] = 1;
    for (int i = 1; i <= n; ++i) yp[i] = yp[i - 1] * Y;
    for (int i = n; i >= 0; --i) {
      acc = acc * X + coeffs[i] * yp[n - i];
      mag = mag * std::fabs(X) + std::fabs(coeffs[i]) * std::fabs(yp[n - i]);
    }
    return {std::fabs(acc), mag * (2 * n + 6) * std::ldexp(1.0L, -60)};
  }

  // Enclosure based filter value, for large arguments or when floats fail.
  Approx approx_big(const Integer& x, const Integer& y) const {
    Real v = value(x, y);
    if (v.exact_rational() && *v.exact_rational() == 0) return {0, 0};
    RatInterval r = enclose_relative(v, 48);
    return {static_cast<long double>(to_double(r.mid())), static_cast<long double>(to_double(r.width())) +
            static_cast<long double>(to_double(r.mid())) * std::ldexp(1.0L, -50)};
  }

  Approx approx_any(const Integer& x, const Integer& y) const {
    const Integer lim = Integer(1) << 50;
    if (abs(x) < lim && abs(y) < lim) {
      Approx a = approx(x.get_si(), y.get_si());
      if (a.ok) return a;
    }
    return approx_big(x, y);
  }

  bool exact = false;
  bool factored = false;
  std::vector<Integer> G;
  Integer content;
  Real scale{1L};

 private:
  const RealForm& f_;

 public:
  int n;
  long double fscale = 1;
  std::vector<std::pair<double, double>> roots;
  std::vector<std::pair<long double, long double>> quads;
  std::vector<long double> coeffs;
};

struct Pick {
  Point p;
  Real value{0L};
  bool found = false;
};

// Exact minimum of |f| over the given points (duplicates allowed).
Pick pick_min(const Model& m, const std::vector<Point>& pts) {
  Pick best;
  if (pts.empty()) return best;
  if (m.exact) {
    Integer bv;
    for (const auto& p : pts) {
      Integer v = abs(m.G_at(p.first, p.second));
      if (!best.found || v < bv || (v == bv && tie_less(p, best.p))) {
        best.found = true;
        best.p = normalize(p);
        bv = v;
      }
    }
    best.value = m.scale * Real(Rational(bv));
    return best;
  }
  std::vector<Approx> ap(pts.size());
  long double U = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ap[i] = m.approx_any(pts[i].first, pts[i].second);
    U = std::min(U, ap[i].a + ap[i].e);
  }
  std::vector<Point> fin;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (ap[i].a - ap[i].e <= U) fin.push_back(normalize(pts[i]));
  std::sort(fin.begin(), fin.end(), tie_less);
  fin.erase(std::unique(fin.begin(), fin.end()), fin.end());
  best.found = true;
  best.p = fin[0];
  best.value = m.value(fin[0].first, fin[0].second);
  for (std::size_t i = 1; i < fin.size(); ++i) {
    Real v = m.value(fin[i].first, fin[i].second);
    if (safe_compare(v, best.value) == Ordering::less) {
      best.p = fin[i];
      best.value = v;
    }
  }
  return best;
}

std::vector<RatInterval> coeff_enclosures(const RealForm& f, long bits) {
  std::vector<RatInterval> c;
  for (const auto& x : f.coefficients()) c.push_back(x.enclose(bits));
  return c;
}

RatInterval horner(const std::vector<RatInterval>& c, const RatInterval& z, long bits = 96) {
  RatInterval acc = c.back();
  for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) acc = round_out(acc * z + c[i], bits);
  return acc;
}

std::vector<RatInterval> derivative(const std::vector<RatInterval>& c) {
  std::vector<RatInterval> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * RatInterval(Rational(static_cast<long>(i))));
  if (d.empty()) d.push_back(RatInterval(Rational(0)));
  return d;
}

// Real roots of a polynomial known only through coefficient enclosures, as
// doubles; the roots of a nearby rational polynomial.
std::vector<double> approx_roots(const std::vector<RatInterval>& c) {
  std::vector<Rational> mid;
  for (const auto& x : c) mid.push_back(x.mid());
  IntPolynomial p = IntPolynomial::from_rationals(mid);
  std::vector<double> out;
  if (p.degree() < 1) return out;
  for (const auto& r : isolate_real_roots(squarefree_part(p))) out.push_back(r.approx());
  return out;
}

std::vector<Real> form_roots(const RealForm& f, bool& exact_roots) {
  exact_roots = true;
  if (f.inner() || f.is_factored()) return f.real_roots();
  exact_roots = false;
  std::vector<Rational> mid;
  for (const auto& x : coeff_enclosures(f, 256)) mid.push_back(x.mid());
  IntPolynomial p = squarefree_part(IntPolynomial::from_rationals(mid));
  std::vector<Real> out;
  for (const auto& r : isolate_real_roots(p)) out.push_back(Real(r));
  std::reverse(out.begin(), out.end());
  return out;
}

// Critical points of |f(., y)| / y^n: the real roots of g(z) = f(z, 1) and g'.
std::vector<double> critical_points(const RealForm& f, const std::vector<Real>& roots) {
  std::vector<double> pts;
  for (const auto& r : roots) pts.push_back(r.approx());
  std::vector<RatInterval> c;
  if (f.inner()) {
    for (const auto& x : f.inner()->coeffs()) c.push_back(RatInterval(x));
  } else {
    c = coeff_enclosures(f, 256);
  }
  for (double z : approx_roots(derivative(c))) pts.push_back(z);
  return pts;
}

// For each y in [1, T]: the integers next to y * xi for the critical points
// xi, plus +-T. Between consecutive critical points |f(., y)| is monotone, so
// the minimum over the row is among these.
std::vector<Point> reduced_box(const std::vector<double>& crit, long T) {
  std::vector<Point> pts;
  pts.emplace_back(Integer(1), Integer(0));
  std::vector<long> xs;
  for (long y = 1; y <= T; ++y) {
    xs.clear();
    xs.push_back(-T);
    xs.push_back(T);
    for (double z : crit) {
      double c = z * static_cast<double>(y);
      if (!(c > -2.0 * T - 4 && c < 2.0 * T + 4)) continue;
      long f = static_cast<long>(std::floor(c));
      for (long k = f - 1; k <= f + 2; ++k)
        if (k >= -T && k <= T) xs.push_back(k);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (long x : xs) pts.emplace_back(Integer(x), Integer(y));
  }
  return pts;
}

std::vector<Candidate> candidates_for(const Model& m, const std::vector<Real>& roots, long depth) {
  std::vector<Candidate> out;
  ExpandOptions opt;
  opt.allow_huge_digits = true;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    std::vector<Convergent> cs;
    try {
      CFExpansion cf = expand(roots[i], depth, opt);
      cs = convergents(cf, depth);
    } catch (const std::out_of_range&) {
    } catch (const UnresolvedError&) {
    }
    for (const auto& c : cs) {
      Real v = m.value(c.p, c.q);
      RatInterval e;
      if (v.exact_rational() && *v.exact_rational() == 0) e = RatInterval(Rational(0));
      else e = enclose_relative(v, 64);
      out.push_back({c.p, c.q, e, i, c.index});
    }
  }
  return out;
}

// ------------------------------------------------------------ certification

// |p| >= t on [a, b], by subdivision.
bool verify_lower(const std::vector<RatInterval>& c, const Rational& a, const Rational& b, const Rational& t,
                  int depth, long& budget) {
  if (--budget < 0) return false;
  RatInterval v = horner(c, RatInterval(a, b));
  if (v.mag_lo() >= t && !v.contains_zero()) return true;
  if (v.mag_hi() < t || depth == 0) return false;
  Rational mid = (a + b) / 2;
  return verify_lower(c, a, mid, t, depth - 1, budget) && verify_lower(c, mid, b, t, depth - 1, budget);
}

bool verify_lower_pieces(const std::vector<RatInterval>& c, const Rational& a, const Rational& b, const Rational& t) {
  if (a >= b) return true;
  long budget = 200000;
  const int pieces = 64;
  Rational w = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k)
    if (!verify_lower(c, a + w * k, a + w * (k + 1), t, 40, budget)) return false;
  return true;
}

// inf |p| on [a, b] as a positive rational lower bound, or nullopt if p may vanish.
std::optional<Rational> inf_abs(const std::vector<RatInterval>& c, const Rational& a, const Rational& b) {
  const int pieces = 32;
  Rational w = (b - a) / pieces, best;
  bool first = true;
  for (int k = 0; k < pieces; ++k) {
    RatInterval v = horner(c, RatInterval(a + w * k, a + w * (k + 1)));
    if (v.contains_zero()) return std::nullopt;
    Rational lo = v.mag_lo();
    if (first || lo < best) best = lo;
    first = false;
  }
  return best;
}

struct Verdict {
  bool proven = false;
  bool heuristic = false;
  std::string note;
};

Verdict certify(const Model& m, const std::vector<Real>& roots, bool exact_roots, const Pick& best, long T, long D,
                const Rational& eta) {
  Verdict v;
  const RealForm& f = m.form();
  const int n = m.n;
  if (best.value.exact_rational() && *best.value.exact_rational() == 0) {
    v.proven = true;
    v.note = "rational root witnessed";
    return v;
  }
  const FormHints& h = f.hints();
  if (h.global_lower && safe_compare(best.value, Real(*h.global_lower)) != Ordering::greater &&
      compare(best.value, Real(*h.global_lower), 1L << 11) != Ordering::greater) {
    v.proven = true;
    v.note = "attains the proven lower bound " + to_string(*h.global_lower) + (h.note.empty() ? "" : " (" + h.note + ")");
    return v;
  }
  if (m.exact) {
    bool rational_root = m.G[n] == 0;
    for (const auto& r : roots)
      if (r.exact_rational()) rational_root = true;
    if (!rational_root) {
      Real bound = m.scale * Real(Rational(m.content));
      if (safe_compare(best.value, bound) != Ordering::greater) {
        v.proven = true;
        v.note = "attains the integrality bound";
        return v;
      }
    }
  }
  if (!exact_roots || n < 3) {
    v.note = exact_roots ? "no tail bound for degree 2" : "roots known only approximately";
    return v;
  }
  const Rational Vhi = enclose_relative(best.value, 48).hi;
  std::vector<RatInterval> g = coeff_enclosures(f, 128);
  std::vector<RatInterval> gp = derivative(g);
  std::vector<RatInterval> hrev(g.rbegin(), g.rend());  // f(1, v) as a polynomial in v

  std::vector<RatInterval> renc;
  Rational maxr = 0;
  for (const auto& r : roots) {
    renc.push_back(r.enclose(80));
    maxr = std::max(maxr, renc.back().mag_hi());
  }
  Rational R = Rational(ceil_of(maxr) + 1);

  bool heuristic = false;
  std::string detail;
  std::vector<RatInterval> hoods;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Rational gap = 1;
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (j != i) gap = std::min(gap, abs_of(renc[i].mid() - renc[j].mid()));
    Rational delta = round_down(std::min(Rational(1, 4), Rational(gap / 4)), 40);
    std::optional<Rational> kappa;
    RatInterval U;
    for (int tries = 0; tries < 24; ++tries) {
      U = RatInterval(renc[i].lo - delta, renc[i].hi + delta);
      if (h.near_root_lower) break;
      kappa = inf_abs(gp, U.lo, U.hi);
      if (kappa) break;
      delta /= 2;
    }
    hoods.push_back(U);
    if (h.near_root_lower) {
      auto lb = h.near_root_lower(i, U);
      if (lb && Vhi <= *lb) continue;
      kappa = inf_abs(gp, U.lo, U.hi);
    }
    if (!kappa) {
      v.note = "derivative vanishes near root " + std::to_string(i);
      return v;
    }
    Rational Yi = Rational(T) / std::max(Rational(1), Rational(renc[i].mag_hi() + delta));
    Rational nonconv = *kappa * rpow(Yi, n - 2) / 2;
    if (nonconv < Vhi) {
      v.note = "off-convergent bound too weak near root " + std::to_string(i);
      return v;
    }
    // convergents beyond the checked depth
    ExpandOptions opt;
    opt.allow_huge_digits = true;
    CFExpansion cf = expand(roots[i], D + 2, opt);
    auto cs = convergents(cf, D + 1);
    Integer qD1 = cs.back().q;
    if (cf.tail() == CFExpansion::Tail::periodic) {
      Integer B = 1;
      long start = D + 2;
      long span = static_cast<long>(cf.periodic_prefix().size() + cf.periodic_block().size()) + 1;
      for (long k = start; k <= start + span; ++k) B = std::max(B, cf.digit(k));
      Rational tail = *kappa * Rational(ipow(qD1, n - 2)) / Rational(B + 2);
      if (tail < Vhi) {
        v.note = "periodic tail bound too weak at root " + std::to_string(i);
        return v;
      }
    } else {
      // assume alpha_{k+1} <= Q_k^eta beyond depth (not proven)
      long den = 1L << 10;
      Rational ex = Rational(n - 2) - eta;
      Integer num = floor_of(ex * den);
      RatInterval qp = nth_root(RatInterval(Rational(ipow(qD1, num.get_ui()))), static_cast<unsigned>(den), 32);
      Rational tail = *kappa * qp.lo / 3;
      if (tail < Vhi) {
        v.note = "digit-cutting tail bound too weak at root " + std::to_string(i);
        return v;
      }
      heuristic = true;
    }
  }
  // far field: |x| <= R|y| outside the neighbourhoods, then |x| > R|y|
  std::sort(hoods.begin(), hoods.end(), [](const RatInterval& a, const RatInterval& b) { return a.lo < b.lo; });
  Rational tA = Vhi / rpow(Rational(T) / R, n);
  Rational cur = -R;
  for (const auto& U : hoods) {
    if (!verify_lower_pieces(g, cur, U.lo, tA)) {
      v.note = "far-field bound failed";
      return v;
    }
    cur = std::max(cur, U.hi);
  }
  if (!verify_lower_pieces(g, cur, R, tA)) {
    v.note = "far-field bound failed";
    return v;
  }
  Rational tB = Vhi / rpow(Rational(T), n);
  if (!verify_lower_pieces(hrev, -1 / R, 1 / R, tB)) {
    v.note = "far-field bound failed near the y = 0 axis";
    return v;
  }
  if (heuristic) {
    v.heuristic = true;
    v.note = "heuristic at depth " + std::to_string(D) + ": non-periodic root tails assumed to satisfy the digit cut";
    return v;
  }
  v.proven = true;
  v.note = "box and convergent tail bounds verified at depth " + std::to_string(D);
  return v;
}

void check_disc(const RealForm& f) {
  int s;
  try {
    s = f.discriminant().sign(1L << 12);
  } catch (const UnresolvedError&) {
    s = 0;
  }
  if (s == 0) throw PreconditionError("form has a repeated root (zero discriminant)");
}

MinResult finish(const Pick& best, long T, long D) {
  MinResult r;
  r.box_bound = T;
  r.cf_depth = D;
  if (!best.found) return r;
  r.value = best.value;
  r.attaining = best.p;
  if (best.value.exact_rational() && *best.value.exact_rational() == 0) r.enclosure = RatInterval(Rational(0));
  else r.enclosure = enclose_relative(best.value, 64);
  return r;
}

}  // namespace

// ------------------------------------------------------------------ brute force

MinResult brute_force_min(const RealForm& f, long T, unsigned threads) {
  if (T < 1) throw PreconditionError("box bound must be >= 1");
  Model m(f);
  unsigned k = worker_count(threads);
  Pick best;
  if (m.exact) {
    Integer bound = 0;
    for (const auto& c : m.G) bound += abs(c);
    bound *= ipow(Integer(T), m.n);
    bool small = bit_length(bound) < 120;
    std::vector<i128> Gs;
    if (small)
      for (const auto& c : m.G) Gs.push_back(to_i128(c));
    struct Local {
      bool found = false;
      Integer v;
      Point p;
    };
    std::vector<Local> loc(k);
    run_workers(k, [&](unsigned w) {
      Local& L = loc[w];
      i128 bv = 0;
      bool bf = false;
      Point bp;
      for (long y = w; y <= T; y += k) {
        for (long x = (y == 0 ? 1 : -T); x <= T; ++x) {
          if (small) {
            i128 acc = 0, X = x, Y = y;
            std::vector<i128> yp(m.n + 1);
            yp[0] = 1;
            for (int i = 1; i <= m.n; ++i) yp[i] = yp[i - 1] * Y;
            for (int i = m.n; i >= 0; --i) acc = acc * X + Gs[i] * yp[m.n - i];
            if (acc < 0) acc = -acc;
            Point p{Integer(x), Integer(y)};
            if (!bf || acc < bv || (acc == bv && tie_less(p, bp))) {
              bf = true;
              bv = acc;
              bp = p;
            }
          } else {
            Integer v = abs(m.G_at(Integer(x), Integer(y)));
            Point p{Integer(x), Integer(y)};
            if (!L.found || v < L.v || (v == L.v && tie_less(p, L.p))) {
              L.found = true;
              L.v = v;
              L.p = p;
            }
          }
        }
      }
      if (small && bf) {
        L.found = true;
        L.v = from_i128(bv);
        L.p = bp;
      }
    });
    for (auto& L : loc) {
      if (!L.found) continue;
      if (!best.found || L.v < abs(m.G_at(best.p.first, best.p.second)) ||
          (L.v == abs(m.G_at(best.p.first, best.p.second)) && tie_less(L.p, best.p))) {
        best.found = true;
        best.p = L.p;
      }
    }
    best.value = m.value(best.p.first, best.p.second);
  } else {
    struct Local {
      long double U = INFINITY;
      std::vector<std::pair<Point, Approx>> keep;
    };
    std::vector<Local> loc(k);
    run_workers(k, [&](unsigned w) {
      Local& L = loc[w];
      auto prune = [&] {
        std::vector<std::pair<Point, Approx>> nk;
        for (auto& e : L.keep)
          if (e.second.a - e.second.e <= L.U) nk.push_back(std::move(e));
        L.keep = std::move(nk);
      };
      for (long y = w; y <= T; y += k) {
        for (long x = (y == 0 ? 1 : -T); x <= T; ++x) {
          Approx a = m.approx(x, y);
          if (!a.ok) a = m.approx_big(Integer(x), Integer(y));
          if (a.a - a.e > L.U) continue;
          L.U = std::min(L.U, a.a + a.e);
          L.keep.push_back({{Integer(x), Integer(y)}, a});
          if (L.keep.size() > 4096) prune();
        }
      }
      prune();
    });
    long double U = INFINITY;
    for (auto& L : loc) U = std::min(U, L.U);
    std::vector<Point> fin;
    for (auto& L : loc)
      for (auto& e : L.keep)
        if (e.second.a - e.second.e <= U) fin.push_back(e.first);
    best = pick_min(m, fin);
  }
  MinResult r = finish(best, T, 0);
  r.certificate_note = "box only";
  return r;
}

MinResult brute_force_min(const BinaryForm& f, long T, unsigned threads) {
  return brute_force_min(RealForm(f), T, threads);
}

// ------------------------------------------------------------------ candidates

std::vector<Candidate> convergent_candidates(const RealForm& f, long depth) {
  check_disc(f);
  Model m(f);
  bool exact_roots;
  auto roots = form_roots(f, exact_roots);
  return candidates_for(m, roots, depth);
}

std::vector<Candidate> convergent_candidates(const BinaryForm& f, long depth) {
  return convergent_candidates(RealForm(f), depth);
}

// ------------------------------------------------------------------ estimate

MinResult m_estimate(const RealForm& f, const MinOptions& opt) {
  if (opt.box < 1 || opt.depth < 0) throw PreconditionError("box must be positive and depth nonnegative");
  const int n = f.degree();
  Rational eta = opt.eta ? *opt.eta : Rational(n - 2, 2);
  if (opt.eta && (eta <= 0 || eta >= n - 2)) throw PreconditionError("eta must lie in (0, n - 2)");
  check_disc(f);
  Model m(f);
  bool exact_roots;
  auto roots = form_roots(f, exact_roots);
  std::vector<Point> pts = reduced_box(critical_points(f, roots), opt.box);
  for (const auto& c : candidates_for(m, roots, opt.depth)) pts.emplace_back(c.x, c.y);
  Pick best = pick_min(m, pts);
  MinResult r = finish(best, opt.box, opt.depth);
  Verdict v = certify(m, roots, exact_roots, best, opt.box, opt.depth, eta);
  r.certified = v.proven;
  r.certificate_note = v.note;
  return r;
}

MinResult m_estimate(const BinaryForm& f, const MinOptions& opt) { return m_estimate(RealForm(f), opt); }

// ------------------------------------------------------------------ m(rho)

RootMinResult m_rho(const Real& rho, int n, long depth) {
  if (n < 2) throw PreconditionError("m_rho needs n >= 2");
  if (depth < 0) throw PreconditionError("depth must be nonnegative");
  RootMinResult r;
  r.degree = n;
  r.depth = depth;
  if (auto q = rho.exact_rational()) {
    CFExpansion cf = expand(*q);
    r.value = Real(0L);
    r.enclosure = RatInterval(Rational(0));
    r.attaining_index = *cf.last_index();
    return r;
  }
  ExpandOptions opt;
  opt.allow_huge_digits = true;
  CFExpansion cf = expand(rho, depth, opt);
  auto cs = convergents(cf, depth);
  bool have = false;
  for (const auto& c : cs) {
    Real d = Real(Rational(c.q)) * rho - Real(Rational(c.p));
    int s = d.sign();
    if (s == 0) {
      r.value = Real(0L);
      r.enclosure = RatInterval(Rational(0));
      r.attaining_index = c.index;
      return r;
    }
    Real v = Real(Rational(ipow(c.q, n - 1))) * (s < 0 ? -d : d);
    if (!have || safe_compare(v, r.value) == Ordering::less) {
      have = true;
      r.value = v;
      r.attaining_index = c.index;
    }
  }
  r.enclosure = enclose_relative(r.value, 64);
  return r;
}

}  // namespace formspec
