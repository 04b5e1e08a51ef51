#pragma once

#include "formspec/rational.hpp"

namespace formspec {

// Closed interval [lo, hi] with exact rational endpoints.
struct RatInterval {
  Rational lo, hi;

  RatInterval() = default;
  RatInterval(const Rational& point) : lo(point), hi(point) {}
  RatInterval(const Rational& l, const Rational& h);

  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool is_point() const { return lo == hi; }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  bool contains(const RatInterval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  // -1 / +1 when the whole interval is strictly negative / positive, 0 otherwise.
  int sign() const;
  // Lower bound of |x| over the interval.
  Rational mag_lo() const;
  Rational mag_hi() const;

  friend bool operator==(const RatInterval&, const RatInterval&) = default;
};

RatInterval operator+(const RatInterval& a, const RatInterval& b);
RatInterval operator-(const RatInterval& a, const RatInterval& b);
RatInterval operator-(const RatInterval& a);
RatInterval operator*(const RatInterval& a, const RatInterval& b);
// Divisor must exclude zero.
RatInterval operator/(const RatInterval& a, const RatInterval& b);
RatInterval abs(const RatInterval& a);
RatInterval ipow(const RatInterval& a, unsigned e);
RatInterval hull(const RatInterval& a, const RatInterval& b);
// Intersection; throws if empty.
RatInterval intersect(const RatInterval& a, const RatInterval& b);
bool overlaps(const RatInterval& a, const RatInterval& b);

// Dyadic outward rounding keeping `bits` fractional bits; bounds the size of
// endpoints during long interval computations.
Rational round_down(const Rational& q, long bits);
Rational round_up(const Rational& q, long bits);
RatInterval round_out(const RatInterval& a, long bits);

// Enclosure of sqrt over a nonnegative interval, outward-rounded at `bits`.
RatInterval sqrt(const RatInterval& a, long bits);

// Enclosure of the k-th root of a nonnegative interval, width about 2^-bits.
RatInterval nth_root(const RatInterval& a, unsigned k, long bits);
// 2^e for any integer e.
Rational pow2(long e);

// Smallest e with 2^-e <= w (w > 0); used to translate widths into bit counts.
long bits_for_width(const Rational& w);
// Smallest e >= 0 with |q| <= 2^e.
long log2_ceil_mag(const Rational& q);

std::string to_string(const RatInterval& iv);

}  // namespace formspec
