#include "formspec/cf.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace formspec {

struct CFExpansion::State {
  Tail kind = Tail::finite;
  std::mutex mu;
  std::vector<Integer> digits;  // memo, index 0 = a0
  bool finished = false;
  std::vector<Integer> prefix, block;  // periodic data; prefix starts with a0
  std::function<std::optional<Integer>()> next;
  std::optional<Real> value;
};

namespace {

std::vector<Integer> euclid_digits(Rational x, std::size_t max = SIZE_MAX) {
  std::vector<Integer> out;
  for (;;) {
    Integer a = floor_of(x);
    out.push_back(a);
    x -= a;
    if (x == 0 || out.size() >= max) break;
    x = 1 / x;
  }
  return out;
}

// Digits shared by every number in [lo, hi].
std::vector<Integer> certain_digits(const RatInterval& iv, std::size_t max) {
  auto a = euclid_digits(iv.lo, max + 1), b = euclid_digits(iv.hi, max + 1);
  std::vector<Integer> out;
  for (std::size_t i = 0; i + 1 < a.size() && i + 1 < b.size() && i < max; ++i) {
    if (a[i] != b[i]) break;
    out.push_back(a[i]);
  }
  return out;
}

bool over_guard(const Integer& a, long index, const ExpandOptions& opt) {
  return index > 0 && !opt.allow_huge_digits && a > opt.digit_guard;
}

}  // namespace

CFExpansion CFExpansion::finite(Integer a0, std::vector<Integer> digits) {
  auto s = std::make_shared<State>();
  s->kind = Tail::finite;
  s->digits.push_back(std::move(a0));
  for (auto& d : digits) {
    if (d < 1) throw PreconditionError("continued fraction digits must be positive");
    s->digits.push_back(std::move(d));
  }
  // canonical form: [..., a, 1] = [..., a + 1]
  if (s->digits.size() >= 2 && s->digits.back() == 1) {
    s->digits.pop_back();
    s->digits.back() += 1;
  }
  s->finished = true;
  Rational v = s->digits.back();
  for (std::size_t i = s->digits.size() - 1; i-- > 0;) v = Rational(s->digits[i]) + 1 / v;
  s->value = Real(v);
  return CFExpansion(s);
}

CFExpansion CFExpansion::periodic(Integer a0, std::vector<Integer> prefix, std::vector<Integer> block) {
  if (block.empty()) throw PreconditionError("periodic block must be nonempty");
  for (const auto& d : prefix)
    if (d < 1) throw PreconditionError("continued fraction digits must be positive");
  for (const auto& d : block)
    if (d < 1) throw PreconditionError("continued fraction digits must be positive");
  auto s = std::make_shared<State>();
  s->kind = Tail::periodic;
  s->value = Real(assemble(a0, prefix, block));
  s->prefix.push_back(a0);
  s->prefix.insert(s->prefix.end(), prefix.begin(), prefix.end());
  s->block = std::move(block);
  return CFExpansion(s);
}

CFExpansion::Tail CFExpansion::tail() const {
  std::lock_guard<std::mutex> lock(s_->mu);
  if (s_->kind == Tail::lazy && s_->finished) return Tail::finite;
  return s_->kind;
}

Integer CFExpansion::digit(long i) const {
  if (i < 0) throw std::out_of_range("negative digit index");
  if (s_->kind == Tail::periodic) {
    std::size_t k = static_cast<std::size_t>(i);
    if (k < s_->prefix.size()) return s_->prefix[k];
    return s_->block[(k - s_->prefix.size()) % s_->block.size()];
  }
  std::lock_guard<std::mutex> lock(s_->mu);
  while (static_cast<long>(s_->digits.size()) <= i && !s_->finished) {
    std::optional<Integer> d = s_->next();
    if (!d) s_->finished = true;
    else s_->digits.push_back(*d);
  }
  if (static_cast<long>(s_->digits.size()) <= i)
    throw std::out_of_range("digit " + std::to_string(i) + " beyond the end of a finite expansion");
  return s_->digits[static_cast<std::size_t>(i)];
}

std::optional<long> CFExpansion::last_index() const {
  if (s_->kind == Tail::periodic) return std::nullopt;
  std::lock_guard<std::mutex> lock(s_->mu);
  if (!s_->finished) return std::nullopt;
  return static_cast<long>(s_->digits.size()) - 1;
}

bool CFExpansion::has_digit(long i) const {
  try {
    digit(i);
    return true;
  } catch (const std::out_of_range&) {
    return false;
  }
}

std::vector<Integer> CFExpansion::digits(long upto) const {
  std::vector<Integer> out;
  for (long i = 0; i <= upto; ++i) {
    if (!has_digit(i)) break;
    out.push_back(digit(i));
  }
  return out;
}

const std::vector<Integer>& CFExpansion::periodic_prefix() const { return s_->prefix; }
const std::vector<Integer>& CFExpansion::periodic_block() const { return s_->block; }
std::optional<Real> CFExpansion::value() const { return s_->value; }

RatInterval CFExpansion::tail_value(long i, long extra) const {
  Integer ai = digit(i);
  if (extra <= 0) {
    if (!has_digit(i + 1)) return RatInterval(Rational(ai));
    return {Rational(ai), Rational(ai + 1)};
  }
  std::vector<Integer> ds;
  bool ended = false;
  for (long j = i; j <= i + extra; ++j) {
    if (!has_digit(j)) {
      ended = true;
      break;
    }
    ds.push_back(digit(j));
  }
  auto eval = [&](const Integer& last_bump) {
    Rational v = Rational(ds.back() + last_bump);
    for (std::size_t k = ds.size() - 1; k-- > 0;) v = Rational(ds[k]) + 1 / v;
    return v;
  };
  if (ended || !has_digit(i + extra + 1)) return RatInterval(eval(Integer(0)));
  Rational a = eval(Integer(0)), b = eval(Integer(1));
  return a < b ? RatInterval(a, b) : RatInterval(b, a);
}

std::string CFExpansion::to_string(long upto) const {
  auto d = digits(upto);
  std::string s = "[" + d[0].get_str();
  for (std::size_t i = 1; i < d.size(); ++i) s += (i == 1 ? "; " : ", ") + d[i].get_str();
  if (!last_index() || *last_index() > upto) s += ", ...";
  return s + "]";
}

CFExpansion expand(const Rational& x, long) {
  auto d = euclid_digits(x);
  Integer a0 = d[0];
  return CFExpansion::finite(a0, std::vector<Integer>(d.begin() + 1, d.end()));
}

CFExpansion expand(const AlgebraicReal& x0, long depth, const ExpandOptions& opt) {
  if (x0.is_rational()) return expand(x0.rational_value(), depth);
  auto s = std::make_shared<CFExpansion::State>();
  s->kind = CFExpansion::Tail::lazy;
  s->value = Real(x0);
  struct Gen {
    AlgebraicReal x;
    long index = 0;
    bool done = false;
    std::optional<std::string> tripped;
  };
  auto g = std::make_shared<Gen>(Gen{x0, 0, false, std::nullopt});
  s->next = [g, opt]() -> std::optional<Integer> {
    if (g->done) return std::nullopt;
    if (g->tripped) throw DigitGuardError(*g->tripped);
    Integer a = g->x.floor();
    if (compare(g->x, Rational(a)) == Ordering::equal) {
      g->done = true;
      return a;
    }
    g->x = cf_step(g->x, a);
    if (over_guard(a, g->index, opt))
      g->tripped = "digit " + a.get_str() + " at index " + std::to_string(g->index) + " exceeds the guard";
    ++g->index;
    return a;
  };
  CFExpansion cf(s);
  if (depth > 0) cf.has_digit(depth);
  return cf;
}

CFExpansion expand(const QuadraticReal& x0, long depth, const ExpandOptions&) {
  if (x0.is_rational()) return expand(x0.rational_value(), depth);
  // complete quotients repeat eventually; look for the period up front
  {
    std::map<std::array<Integer, 4>, long> seen;
    std::vector<Integer> ds;
    QuadraticReal x = x0;
    const long cap = 4096 + std::max(0L, depth);
    for (long k = 0; k <= cap; ++k) {
      std::array<Integer, 4> key{x.p(), x.q(), x.d(), x.r()};
      auto [it, fresh] = seen.emplace(key, k);
      if (!fresh) {
        long i = it->second, j = k;
        // keep a0 out of the block: shift a purely periodic start by one
        long st = std::max(1L, i);
        if (st == 1 && i == 0) {
          ds.push_back(ds[0]);  // digit j, equal to a0
          ++j;
        }
        std::vector<Integer> prefix(ds.begin() + 1, ds.begin() + st), block(ds.begin() + st, ds.begin() + j);
        return CFExpansion::periodic(ds[0], std::move(prefix), std::move(block));
      }
      Integer a = x.floor();
      ds.push_back(a);
      x = QuadraticReal(Rational(1)) / (x - QuadraticReal(Rational(a)));
    }
  }
  auto s = std::make_shared<CFExpansion::State>();
  s->kind = CFExpansion::Tail::lazy;
  s->value = Real(x0);
  auto x = std::make_shared<QuadraticReal>(x0);
  auto done = std::make_shared<bool>(false);
  // Quadratic tails never grow a minimal polynomial, so no digit guard here.
  s->next = [x, done]() -> std::optional<Integer> {
    if (*done) return std::nullopt;
    Integer a = x->floor();
    QuadraticReal f = *x - QuadraticReal(Rational(a));
    if (f.sign() == 0) {
      *done = true;
      return a;
    }
    *x = QuadraticReal(Rational(1)) / f;
    return a;
  };
  CFExpansion cf(s);
  if (depth > 0) cf.has_digit(depth);
  return cf;
}

CFExpansion expand(const Real& x, long depth, const ExpandOptions& opt) {
  if (auto r = x.exact_rational()) return expand(*r, depth);
  if (auto a = x.algebraic()) return expand(*a, depth, opt);
  if (auto q = x.quadratic()) return expand(*q, depth, opt);
  auto s = std::make_shared<CFExpansion::State>();
  s->kind = CFExpansion::Tail::lazy;
  s->value = x;
  struct Gen {
    Real v;
    std::vector<Integer> known;
    std::size_t pos = 0;
    long bits = 64;
    std::optional<std::string> tripped;
  };
  auto g = std::make_shared<Gen>(Gen{x, {}, 0, 64, std::nullopt});
  s->next = [g, opt]() -> std::optional<Integer> {
    if (g->tripped) throw DigitGuardError(*g->tripped);
    while (g->pos >= g->known.size()) {
      g->bits *= 2;
      if (g->bits > (1L << 20)) throw UnresolvedError("expansion of an expression stalled (value may be rational)");
      auto c = certain_digits(g->v.enclose(g->bits), g->known.size() + 64);
      if (c.size() > g->known.size()) g->known = c;
    }
    Integer a = g->known[g->pos];
    if (over_guard(a, static_cast<long>(g->pos), opt))
      g->tripped = "digit " + a.get_str() + " at index " + std::to_string(g->pos) + " exceeds the guard";
    ++g->pos;
    return a;
  };
  CFExpansion cf(s);
  if (depth > 0) cf.has_digit(depth);
  return cf;
}

std::vector<Convergent> convergents(const CFExpansion& cf, long upto) {
  if (auto last = cf.last_index(); last && upto > *last)
    throw std::out_of_range("convergent " + std::to_string(upto) + " requested beyond finite expansion of length " +
                            std::to_string(*last));
  std::vector<Convergent> out;
  Integer p2 = 0, q2 = 1, p1 = 1, q1 = 0;
  for (long i = 0; i <= upto; ++i) {
    Integer a = cf.digit(i);
    Integer p = a * p1 + p2, q = a * q1 + q2;
    out.push_back({i, p, q});
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
  }
  return out;
}

RatInterval approx_error(const CFExpansion& cf, long N) {
  auto cs = convergents(cf, N);
  const Integer& q = cs.back().q;
  Integer qm = N >= 1 ? cs[N - 1].q : Integer(0);
  auto last = cf.last_index();
  if (last && *last == N) return RatInterval(Rational(0));
  if (last) {
    // finite: a_{N+1} is an exact rational
    RatInterval a = cf.tail_value(N + 1, *last - N);
    Rational v = 1 / (Rational(q) * (a.lo * q + qm));
    return RatInterval(v);
  }
  Integer a = cf.digit(N + 1);
  Rational lo = 1 / (Rational(q) * Rational((a + 1) * q + qm));
  Rational hi = 1 / (Rational(q) * Rational(a * q + qm));
  return {lo, hi};
}

bool is_convergent(const CFExpansion& cf, const Integer& X, const Integer& Y, long depth) {
  Integer p2 = 0, q2 = 1, p1 = 1, q1 = 0;
  for (long i = 0; i <= depth; ++i) {
    if (!cf.has_digit(i)) return false;
    Integer a = cf.digit(i);
    Integer p = a * p1 + p2, q = a * q1 + q2;
    if (p == X && q == Y) return true;
    if (q > Y) return false;
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
  }
  return false;
}

QuadraticReal assemble(const Integer& a0, const std::vector<Integer>& prefix, const std::vector<Integer>& block) {
  if (block.empty()) throw PreconditionError("tail block must be nonempty");
  for (const auto& d : prefix)
    if (d < 1) throw PreconditionError("digits must be >= 1");
  for (const auto& d : block)
    if (d < 1) throw PreconditionError("digits must be >= 1");
  // w = [b1; b2, ..., bk, w] = (P w + P')/(Q w + Q')
  Integer P = 1, Pp = 0, Q = 0, Qp = 1;
  for (const auto& b : block) {
    Integer nP = b * P + Pp, nQ = b * Q + Qp;
    Pp = P;
    Qp = Q;
    P = nP;
    Q = nQ;
  }
  Integer disc = (P - Qp) * (P - Qp) + 4 * Pp * Q;
  QuadraticReal w(Integer(P - Qp), Integer(1), disc, Integer(2 * Q));
  // x = [a0; prefix, w]
  Integer p = a0, q = 1, pm = 1, qm = 0;
  for (const auto& c : prefix) {
    Integer np = c * p + pm, nq = c * q + qm;
    pm = p;
    qm = q;
    p = np;
    q = nq;
  }
  return w.mobius(p, pm, q, qm);
}

Rational cylinder_measure(const Integer&, const std::vector<Integer>& prefix, const Integer& k) {
  if (k < 1) throw PreconditionError("cylinder digit must be positive");
  Integer q = 1, qm = 0;
  for (const auto& c : prefix) {
    if (c < 1) throw PreconditionError("digits must be >= 1");
    Integer nq = c * q + qm;
    qm = q;
    q = nq;
  }
  return 1 / (Rational(k * q + qm) * Rational((k + 1) * q + qm));
}

static double log_int(const Integer& z) {
  long e;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

RatInterval log_ratio(const Integer& a, const Integer& b, unsigned long den) {
  if (a < 1 || b < 2) throw PreconditionError("log_ratio needs a >= 1 and b >= 2");
  if (a == 1) return RatInterval(Rational(0));
  Integer A = ipow(a, den);
  long j = static_cast<long>(std::floor(static_cast<double>(den) * log_int(a) / log_int(b)));
  if (j < 0) j = 0;
  Integer B = ipow(b, static_cast<unsigned long>(j));
  while (B > A && j > 0) {
    --j;
    B /= b;
  }
  while (B * b <= A) {
    ++j;
    B *= b;
  }
  if (B == A) return RatInterval(make_rational(j, static_cast<long>(den)));
  return {make_rational(j, static_cast<long>(den)), make_rational(j + 1, static_cast<long>(den))};
}

ExponentEstimate dioph_exponent_estimate(const CFExpansion& cf, long depth) {
  if (depth < 2) throw PreconditionError("exponent estimate needs depth >= 2");
  long upto = depth;
  if (auto last = cf.last_index()) upto = std::min(upto, *last);
  ExponentEstimate est{RatInterval(Rational(2)), depth, 0, {}};
  if (upto < 2) return est;
  auto cs = convergents(cf, upto);
  Rational best_lo = 0, best_hi = 0;
  for (long i = 2; i <= upto; ++i) {
    const Integer& qprev = cs[i - 1].q;
    if (qprev < 2) continue;
    RatInterval t = log_ratio(cf.digit(i), qprev);
    est.terms.emplace_back(i, t);
    if (t.lo > best_lo || (t.lo == best_lo && t.hi > best_hi && est.argmax == 0)) {
      if (t.hi > 0) est.argmax = i;
    }
    if (t.lo > best_lo) best_lo = t.lo;
    if (t.hi > best_hi) best_hi = t.hi;
  }
  est.value = RatInterval(2 + best_lo, 2 + best_hi);
  return est;
}

}  // namespace formspec
