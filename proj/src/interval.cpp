#include "formspec/interval.hpp"

#include <algorithm>

namespace formspec {

RatInterval::RatInterval(const Rational& l, const Rational& h) : lo(l), hi(h) {
  if (hi < lo) throw PreconditionError("interval with lo > hi");
}

int RatInterval::sign() const {
  if (lo > 0) return 1;
  if (hi < 0) return -1;
  return 0;
}

Rational RatInterval::mag_lo() const {
  if (lo > 0) return lo;
  if (hi < 0) return -hi;
  return 0;
}

Rational RatInterval::mag_hi() const { return std::max(abs_of(lo), abs_of(hi)); }

RatInterval operator+(const RatInterval& a, const RatInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
RatInterval operator-(const RatInterval& a, const RatInterval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
RatInterval operator-(const RatInterval& a) { return {-a.hi, -a.lo}; }

RatInterval operator*(const RatInterval& a, const RatInterval& b) {
  if (a.is_point() && b.is_point()) return RatInterval(a.lo * b.lo);
  if (a.lo >= 0 && b.lo >= 0) return {a.lo * b.lo, a.hi * b.hi};
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

RatInterval operator/(const RatInterval& a, const RatInterval& b) {
  if (b.contains_zero()) throw UnresolvedError("interval division by an interval containing zero");
  return a * RatInterval(std::min(1 / b.lo, 1 / b.hi), std::max(1 / b.lo, 1 / b.hi));
}

RatInterval abs(const RatInterval& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return -a;
  return {Rational(0), a.mag_hi()};
}

RatInterval ipow(const RatInterval& a, unsigned e) {
  if (e == 0) return RatInterval(Rational(1));
  if (e % 2 == 1) return {rpow(a.lo, e), rpow(a.hi, e)};
  RatInterval m = abs(a);
  return {rpow(m.lo, e), rpow(m.hi, e)};
}

RatInterval hull(const RatInterval& a, const RatInterval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

RatInterval intersect(const RatInterval& a, const RatInterval& b) {
  Rational l = std::max(a.lo, b.lo), h = std::min(a.hi, b.hi);
  if (h < l) throw PreconditionError("empty interval intersection");
  return {l, h};
}

bool overlaps(const RatInterval& a, const RatInterval& b) { return !(a.hi < b.lo || b.hi < a.lo); }

Rational round_down(const Rational& q, long bits) {
  if (q.get_den() == 1) return q;
  Integer scaled;
  Integer num = q.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
  Rational r(scaled);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
  return r;
}

Rational round_up(const Rational& q, long bits) {
  if (q.get_den() == 1) return q;
  Integer scaled;
  Integer num = q.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  mpz_cdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
  Rational r(scaled);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
  return r;
}

RatInterval round_out(const RatInterval& a, long bits) {
  // Endpoints that are already short stay exact.
  auto small = [bits](const Rational& q) {
    return static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2)) <= bits + 1;
  };
  Rational l = small(a.lo) ? a.lo : round_down(a.lo, bits);
  Rational h = small(a.hi) ? a.hi : round_up(a.hi, bits);
  return {l, h};
}

static Integer scaled_isqrt_floor(const Rational& q, long bits) {
  // floor(sqrt(q) * 2^bits)
  Rational s = q;
  mpq_mul_2exp(s.get_mpq_t(), s.get_mpq_t(), static_cast<mp_bitcnt_t>(2 * bits));
  return isqrt(floor_of(s));
}

RatInterval sqrt(const RatInterval& a, long bits) {
  if (a.lo < 0) throw PreconditionError("sqrt of a negative interval");
  Integer lo = scaled_isqrt_floor(a.lo, bits);
  Integer hi = scaled_isqrt_floor(a.hi, bits) + 1;
  Rational l(lo), h(hi);
  mpq_div_2exp(l.get_mpq_t(), l.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
  mpq_div_2exp(h.get_mpq_t(), h.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
  // exact squares keep a point value
  if (a.is_point() && is_square(a.lo.get_num()) && is_square(a.lo.get_den()))
    return RatInterval(Rational(isqrt(a.lo.get_num()), isqrt(a.lo.get_den())));
  return {l, h};
}

Rational pow2(long e) {
  Rational r(1);
  if (e >= 0) mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return r;
}

long log2_ceil_mag(const Rational& q) {
  if (q == 0) return 0;
  Rational a = abs_of(q);
  long e = bit_length(a.get_num()) - bit_length(a.get_den()) + 1;
  if (e < 0) e = 0;
  return e;
}

long bits_for_width(const Rational& w) {
  if (w <= 0) throw PreconditionError("nonpositive width");
  long e = bit_length(w.get_den()) - bit_length(w.get_num()) + 1;
  while (e > 0) {
    Rational t(1);
    mpq_div_2exp(t.get_mpq_t(), t.get_mpq_t(), static_cast<mp_bitcnt_t>(e - 1));
    if (t <= w) --e; else break;
  }
  if (e < 0) e = 0;
  return e;
}

std::string to_string(const RatInterval& iv) { return "[" + to_string(iv.lo) + ", " + to_string(iv.hi) + "]"; }

static Rational root_floor(const Rational& q, unsigned k, long bits) {
  Integer scaled = floor_of(q * pow2(static_cast<long>(k) * bits));
  Integer r;
  mpz_root(r.get_mpz_t(), scaled.get_mpz_t(), k);
  return Rational(r) * pow2(-bits);
}

RatInterval nth_root(const RatInterval& a, unsigned k, long bits) {
  if (a.lo < 0) throw PreconditionError("root of a negative interval");
  if (k == 0) throw PreconditionError("zeroth root");
  Rational lo = root_floor(a.lo, k, bits);
  Rational hi = root_floor(a.hi, k, bits);
  Rational h = hi;
  // hi is exact only when its k-th power reproduces a.hi
  Rational p = 1;
  for (unsigned i = 0; i < k; ++i) p *= h;
  if (p != a.hi) hi += pow2(-bits);
  return {lo, hi};
}

}  // namespace formspec
