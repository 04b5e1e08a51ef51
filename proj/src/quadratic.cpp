#include "formspec/quadratic.hpp"

namespace formspec {

void split_square(const Integer& n0, Integer& s, Integer& m) {
  if (n0 <= 0) throw PreconditionError("split_square expects a positive integer");
  Integer n = n0;
  s = 1;
  for (unsigned long pr = 2; pr <= 1000000; pr += (pr == 2 ? 1 : 2)) {
    Integer pp = Integer(pr) * pr;
    if (pp > n) break;
    while (mpz_divisible_p(n.get_mpz_t(), pp.get_mpz_t())) {
      n /= pp;
      s *= pr;
    }
  }
  if (n > 1 && is_square(n)) {
    Integer t = isqrt(n);
    s *= t;
    n = 1;
  }
  m = n;
}

QuadraticReal::QuadraticReal(const Rational& v) : p_(v.get_num()), q_(0), d_(1), r_(v.get_den()) {}

QuadraticReal::QuadraticReal(Integer p, Integer q, Integer d, Integer r)
    : p_(std::move(p)), q_(std::move(q)), d_(std::move(d)), r_(std::move(r)) {
  if (r_ == 0) throw PreconditionError("quadratic real with zero denominator");
  if (d_ <= 0) throw PreconditionError("quadratic real needs d > 0");
  Integer s, m;
  split_square(d_, s, m);
  q_ *= s;
  d_ = m;
  if (d_ == 1) {
    p_ += q_;
    q_ = 0;
  }
  canonicalize();
}

void QuadraticReal::canonicalize() {
  if (r_ < 0) {
    p_ = -p_;
    q_ = -q_;
    r_ = -r_;
  }
  Integer g;
  mpz_gcd(g.get_mpz_t(), p_.get_mpz_t(), q_.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r_.get_mpz_t());
  if (g > 1) {
    p_ /= g;
    q_ /= g;
    r_ /= g;
  }
}

Rational QuadraticReal::rational_value() const {
  if (q_ != 0) throw PreconditionError("quadratic real is irrational");
  return make_rational(p_, r_);
}

// sign of p + q sqrt(d)
static int sign_pq(const Integer& p, const Integer& q, const Integer& d) {
  int sp = sgn(p), sq = sgn(q);
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  Integer lhs = p * p, rhs = q * q * d;
  int c = ::cmp(lhs, rhs);
  return c > 0 ? sp : (c < 0 ? sq : 0);
}

int QuadraticReal::sign() const { return sign_pq(p_, q_, d_); }

Integer QuadraticReal::floor() const {
  if (q_ == 0) return floor_of(make_rational(p_, r_));
  Integer t = q_ * q_ * d_;
  Integer s = isqrt(t);  // irrational: sqrt(t) in (s, s+1)
  Integer ft = q_ > 0 ? s : Integer(-s - 1);
  Integer num = p_ + ft, res;
  mpz_fdiv_q(res.get_mpz_t(), num.get_mpz_t(), r_.get_mpz_t());
  return res;
}

RatInterval QuadraticReal::enclose(long bits) const {
  if (q_ == 0) return RatInterval(make_rational(p_, r_));
  // |q| sqrt(d) / r to 2^-(bits) needs sqrt(q^2 d) to about bits + log2(1/r).
  long extra = bits + 2;
  Integer t = q_ * q_ * d_;
  Integer scaled = t;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * extra));
  Integer s = isqrt(scaled);
  Rational lo(s), hi(s + 1);
  mpq_div_2exp(lo.get_mpq_t(), lo.get_mpq_t(), static_cast<mp_bitcnt_t>(extra));
  mpq_div_2exp(hi.get_mpq_t(), hi.get_mpq_t(), static_cast<mp_bitcnt_t>(extra));
  if (q_ < 0) {
    Rational tmp = -hi;
    hi = -lo;
    lo = tmp;
  }
  Rational pr(p_), rr(r_);
  return {(pr + lo) / rr, (pr + hi) / rr};
}

double QuadraticReal::approx() const { return to_double(enclose(64).mid()); }

QuadraticReal QuadraticReal::operator-() const {
  QuadraticReal x = *this;
  x.p_ = -x.p_;
  x.q_ = -x.q_;
  return x;
}

static Integer common_d(const QuadraticReal& a, const QuadraticReal& b) {
  if (a.q() == 0) return b.d();
  if (b.q() == 0) return a.d();
  if (a.d() != b.d()) throw PreconditionError("quadratic reals from different fields");
  return a.d();
}

QuadraticReal operator+(const QuadraticReal& a, const QuadraticReal& b) {
  Integer d = common_d(a, b);
  QuadraticReal x;
  x.p_ = a.p_ * b.r_ + b.p_ * a.r_;
  x.q_ = a.q_ * b.r_ + b.q_ * a.r_;
  x.r_ = a.r_ * b.r_;
  x.d_ = x.q_ == 0 ? Integer(1) : d;
  x.canonicalize();
  return x;
}

QuadraticReal operator-(const QuadraticReal& a, const QuadraticReal& b) { return a + (-b); }

QuadraticReal operator*(const QuadraticReal& a, const QuadraticReal& b) {
  Integer d = common_d(a, b);
  QuadraticReal x;
  x.p_ = a.p_ * b.p_ + a.q_ * b.q_ * d;
  x.q_ = a.p_ * b.q_ + a.q_ * b.p_;
  x.r_ = a.r_ * b.r_;
  x.d_ = x.q_ == 0 ? Integer(1) : d;
  x.canonicalize();
  return x;
}

QuadraticReal operator/(const QuadraticReal& a, const QuadraticReal& b) {
  if (b.sign() == 0) throw PreconditionError("division by zero quadratic real");
  Integer d = common_d(a, b);
  // 1/b = r (p - q sqrt d) / (p^2 - q^2 d)
  QuadraticReal inv;
  inv.p_ = b.r_ * b.p_;
  inv.q_ = -b.r_ * b.q_;
  inv.r_ = b.p_ * b.p_ - b.q_ * b.q_ * d;
  inv.d_ = inv.q_ == 0 ? Integer(1) : d;
  inv.canonicalize();
  return a * inv;
}

QuadraticReal QuadraticReal::mobius(const Integer& a, const Integer& b, const Integer& c, const Integer& d) const {
  QuadraticReal num = *this * QuadraticReal(Rational(a)) + QuadraticReal(Rational(b));
  QuadraticReal den = *this * QuadraticReal(Rational(c)) + QuadraticReal(Rational(d));
  return num / den;
}

std::string QuadraticReal::to_string() const {
  if (q_ == 0) return formspec::to_string(make_rational(p_, r_));
  return "(" + p_.get_str() + " + " + q_.get_str() + "*sqrt(" + d_.get_str() + "))/" + r_.get_str();
}

Ordering compare(const QuadraticReal& a, const QuadraticReal& b) {
  int s = (a - b).sign();
  return s < 0 ? Ordering::less : (s > 0 ? Ordering::greater : Ordering::equal);
}

Ordering compare(const QuadraticReal& a, const Rational& b) { return compare(a, QuadraticReal(b)); }

AlgebraicReal quadratic_to_algebraic(const QuadraticReal& v) {
  if (v.is_rational()) return AlgebraicReal(v.rational_value());
  const Integer &p = v.p(), &q = v.q(), &d = v.d(), &r = v.r();
  IntPolynomial mp(std::vector<Integer>{Integer(p * p - q * q * d), Integer(-2 * p * r), Integer(r * r)});
  auto roots = isolate_real_roots(mp.primitive());
  // Two real roots (p +- |q| sqrt d)/r; the sign of q picks the branch.
  return q > 0 ? roots.back() : roots.front();
}

}  // namespace formspec
