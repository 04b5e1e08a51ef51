#include "formspec/algebraic.hpp"

#include <algorithm>
#include <functional>

namespace formspec {

static IntPolynomial linear_minpoly(const Rational& v) {
  return IntPolynomial(std::vector<Integer>{Integer(-v.get_num()), v.get_den()});
}

AlgebraicReal::AlgebraicReal(const Rational& value) : p_(linear_minpoly(value)), lo_(value), hi_(value) {}

AlgebraicReal::AlgebraicReal(IntPolynomial minpoly, const Rational& lo, const Rational& hi)
    : p_(minpoly.primitive()), lo_(lo), hi_(hi) {
  if (p_.degree() < 1) throw PreconditionError("algebraic real needs a nonconstant polynomial");
  if (hi_ < lo_) throw PreconditionError("isolating interval with lo > hi");
  if (lo_ == hi_) {
    if (p_.sign_at(lo_) != 0) throw PreconditionError("degenerate interval is not a root");
    p_ = linear_minpoly(lo_);
    return;
  }
  SturmSequence s(p_);
  if (s.count(lo_, hi_) != 1) throw PreconditionError("interval does not isolate exactly one root");
  if (p_.sign_at(hi_) == 0) {
    lo_ = hi_;
    p_ = linear_minpoly(lo_);
    return;
  }
  // Move lo off a neighbouring root so that the root sits strictly inside.
  while (p_.sign_at(lo_) == 0) {
    Rational m = (lo_ + hi_) / 2;
    int sm = p_.sign_at(m);
    if (sm == 0) {
      lo_ = hi_ = m;
      p_ = linear_minpoly(m);
      return;
    }
    if (s.count(lo_, m) == 1) hi_ = m;
    else lo_ = m;
  }
  if (p_.degree() == 1) {
    Rational v = make_rational(-p_.coeffs()[0], p_.coeffs()[1]);
    lo_ = hi_ = v;
  }
}

const Rational& AlgebraicReal::rational_value() const {
  if (!is_rational()) throw PreconditionError("algebraic real is irrational");
  return lo_;
}

// A short rational strictly inside (lo, hi), close to the midpoint.
static Rational inner_point(const Rational& lo, const Rational& hi) {
  Rational w = hi - lo;
  long bits = bits_for_width(w) + 2;
  Rational m = round_down((lo + hi) / 2, bits);
  if (m <= lo || m >= hi) m = (lo + hi) / 2;
  return m;
}

AlgebraicReal AlgebraicReal::refine(const Rational& width) const {
  if (width <= 0) throw PreconditionError("refine width must be positive");
  if (is_rational()) return *this;
  Rational lo = lo_, hi = hi_;
  int slo = p_.sign_at(lo);
  while (hi - lo > width) {
    Rational m = inner_point(lo, hi);
    int sm = p_.sign_at(m);
    if (sm == 0) return AlgebraicReal(m);
    if (sm == slo) lo = m;
    else hi = m;
  }
  return AlgebraicReal(Unchecked{}, p_, lo, hi);
}

AlgebraicReal AlgebraicReal::refine_bits(long bits) const {
  Rational w(1);
  mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
  return refine(w);
}

Integer AlgebraicReal::floor() const {
  if (is_rational()) return floor_of(lo_);
  AlgebraicReal a = *this;
  for (;;) {
    Integer fl = floor_of(a.lo_), fh = floor_of(a.hi_);
    if (fl == fh) return fl;
    // An integer k lies in (lo, hi]; decide the side exactly.
    Integer k = fl + 1;
    Ordering o = compare(a, Rational(k));
    if (o == Ordering::equal) return k;
    if (fh == k) return o == Ordering::less ? fl : k;
    a = a.refine(a.hi_ - a.lo_ == 0 ? Rational(1) : Rational((a.hi_ - a.lo_) / 4));
  }
}

double AlgebraicReal::approx() const {
  if (is_rational()) return to_double(lo_);
  AlgebraicReal a = refine_bits(60 + log2_ceil_mag(hi_ - lo_));
  return to_double(a.interval().mid());
}

int sturm_root_count(const IntPolynomial& p, const RatInterval& iv) {
  SturmSequence s(p);
  return s.count(iv.lo, iv.hi);
}

std::vector<AlgebraicReal> isolate_real_roots(const IntPolynomial& p0) {
  if (p0.is_zero()) throw PreconditionError("cannot isolate the roots of the zero polynomial");
  if (p0.degree() == 0) return {};
  IntPolynomial p = p0.primitive();
  SturmSequence s(p);  // rejects non-squarefree input
  Rational b = root_bound(p);
  std::vector<AlgebraicReal> out;
  std::function<void(const Rational&, const Rational&, int)> rec = [&](const Rational& lo, const Rational& hi, int n) {
    if (n == 0) return;
    if (n == 1) {
      out.emplace_back(p, lo, hi);
      return;
    }
    Rational m = (lo + hi) / 2;
    int left = s.count(lo, m);
    rec(lo, m, left);
    rec(m, hi, n - left);
  };
  // Left-to-right recursion already yields ascending order.
  rec(-b, b, s.count(-b, b));

  // Make rational roots exact and divide them out, so the remaining roots
  // carry a lower-degree defining polynomial. A rational root has denominator
  // <= |lead|, and an interval narrower than 1/lead^2 holds at most one such
  // fraction: the simplest one.
  Integer L = abs(p.lead());
  Rational w = 1 / (Rational(L) * Rational(L) * 2);
  IntPolynomial cof = p;
  std::vector<bool> rational(out.size(), false);
  for (std::size_t i = 0; i < out.size(); ++i) {
    AlgebraicReal fine = out[i].refine(w);
    if (fine.is_rational()) {
      out[i] = fine;
    } else {
      Rational q = simplest_in(fine.lo(), fine.hi());
      if (q.get_den() > L || p.sign_at(q) != 0) continue;
      out[i] = AlgebraicReal(q);
    }
    rational[i] = true;
    const Rational& v = out[i].rational_value();
    cof = exact_div(cof, IntPolynomial(std::vector<Integer>{Integer(-v.get_num()), Integer(v.get_den())}));
  }
  if (cof.degree() < p.degree())
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!rational[i]) out[i] = AlgebraicReal(cof, out[i].lo(), out[i].hi());
  return out;
}

Rational simplest_in(const Rational& lo, const Rational& hi) {
  if (hi < lo) throw PreconditionError("simplest_in needs lo <= hi");
  Integer f = floor_of(lo);
  if (Rational(f) == lo) return lo;
  if (Rational(f + 1) <= hi) return Rational(f + 1);
  // lo, hi share the integer part f
  return Rational(f) + 1 / simplest_in(1 / (hi - f), 1 / (lo - f));
}

AlgebraicReal refine(const AlgebraicReal& a, const Rational& width) { return a.refine(width); }

Ordering compare(const AlgebraicReal& a, const Rational& q) {
  if (a.is_rational()) {
    int c = ::cmp(a.rational_value(), q);
    return c < 0 ? Ordering::less : (c > 0 ? Ordering::greater : Ordering::equal);
  }
  if (q <= a.lo()) return Ordering::greater;
  if (q >= a.hi()) return Ordering::less;
  int sq = a.minpoly().sign_at(q);
  if (sq == 0) return Ordering::equal;
  return sq == a.minpoly().sign_at(a.lo()) ? Ordering::greater : Ordering::less;
}

Ordering compare(const AlgebraicReal& a, const AlgebraicReal& b) {
  if (a.is_rational()) {
    Ordering o = compare(b, a.rational_value());
    return o == Ordering::less ? Ordering::greater : (o == Ordering::greater ? Ordering::less : Ordering::equal);
  }
  if (b.is_rational()) return compare(a, b.rational_value());
  // Common roots of both minimal polynomials are the only way to be equal.
  IntPolynomial g = gcd(a.minpoly(), b.minpoly());
  AlgebraicReal x = a, y = b;
  for (int it = 0;; ++it) {
    if (x.hi() <= y.lo()) return Ordering::less;
    if (y.hi() <= x.lo()) return Ordering::greater;
    if (g.degree() >= 1) {
      RatInterval ov = intersect(x.interval(), y.interval());
      // Both intervals isolate a root of g only if the roots coincide.
      if (ov.lo < ov.hi && sturm_root_count(g, ov) == 1 && x.interval().contains(ov) && y.interval().contains(ov)) {
        if (sturm_root_count(g, x.interval()) == 1 && sturm_root_count(g, y.interval()) == 1) return Ordering::equal;
      }
    }
    x = x.refine((x.hi() - x.lo()) / 4);
    y = y.refine((y.hi() - y.lo()) / 4);
    if (it > 100000) throw UnresolvedError("algebraic comparison did not resolve");
  }
}

AlgebraicReal cf_step(const AlgebraicReal& x0, const Integer& a) {
  if (x0.is_rational()) return AlgebraicReal(Rational(1 / (x0.rational_value() - a)));
  AlgebraicReal x = x0;
  // Need a < lo so that 1/(x-a) has finite positive bounds.
  while (x.lo() <= Rational(a)) {
    if (compare(x, Rational(a)) != Ordering::greater) throw PreconditionError("cf_step requires x > a");
    x = x.refine((x.hi() - x.lo()) / 2);
  }
  IntPolynomial q = x.minpoly().shift(a).reverse().primitive();
  Rational nlo = 1 / (x.hi() - a), nhi = 1 / (x.lo() - a);
  return AlgebraicReal(AlgebraicReal::Unchecked{}, q, nlo, nhi);
}

std::string to_string(const AlgebraicReal& a) {
  if (a.is_rational()) return to_string(a.rational_value());
  return "root of " + a.minpoly().to_string() + " in " + to_string(a.interval());
}

AlgebraicReal shifted(const AlgebraicReal& x, const Rational& q) {
  if (x.is_rational()) return AlgebraicReal(Rational(x.rational_value() + q));
  // b^n P(x - a/b) = sum p_i (b x - a)^i b^(n-i)
  const auto& c = x.minpoly().coeffs();
  int n = x.degree();
  Integer a = q.get_num(), b = q.get_den();
  IntPolynomial acc, lin(std::vector<Integer>{Integer(-a), b}), pw(std::vector<Integer>{Integer(1)});
  for (int i = 0; i <= n; ++i) {
    acc = acc + (c[i] * ipow(b, n - i)) * pw;
    pw = pw * lin;
  }
  return AlgebraicReal(acc, x.lo() + q, x.hi() + q);
}

AlgebraicReal scaled(const AlgebraicReal& x, const Rational& q) {
  if (q == 0) return AlgebraicReal(Rational(0));
  if (x.is_rational()) return AlgebraicReal(Rational(x.rational_value() * q));
  // a^n P(b y / a) = sum p_i b^i a^(n-i) y^i
  const auto& c = x.minpoly().coeffs();
  int n = x.degree();
  Integer a = q.get_num(), b = q.get_den();
  std::vector<Integer> out(n + 1);
  for (int i = 0; i <= n; ++i) out[i] = c[i] * ipow(b, i) * ipow(a, n - i);
  Rational l = x.lo() * q, h = x.hi() * q;
  if (q < 0) std::swap(l, h);
  return AlgebraicReal(IntPolynomial(out), l, h);
}

}  // namespace formspec
