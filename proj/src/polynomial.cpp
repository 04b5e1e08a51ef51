#include "formspec/polynomial.hpp"

#include <sstream>

namespace formspec {

IntPolynomial::IntPolynomial(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
  for (long v : coeffs) c_.emplace_back(v);
  trim();
}

void IntPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPolynomial IntPolynomial::from_rationals(const std::vector<Rational>& coeffs) {
  Integer l = 1;
  for (const auto& q : coeffs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::vector<Integer> out;
  out.reserve(coeffs.size());
  for (const auto& q : coeffs) out.push_back(Integer(q.get_num() * (l / q.get_den())));
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::parse_descending(const std::string& text) {
  std::istringstream in(text);
  std::vector<Integer> desc;
  std::string tok;
  while (in >> tok) desc.push_back(parse_integer(tok));
  if (desc.empty()) throw PreconditionError("empty polynomial");
  return IntPolynomial(std::vector<Integer>(desc.rbegin(), desc.rend()));
}

Rational IntPolynomial::eval(const Rational& x) const {
  if (c_.empty()) return 0;
  // Homogenized Horner: p(a/b) b^n is an integer.
  const Integer& a = x.get_num();
  const Integer& b = x.get_den();
  Integer acc = c_.back(), bp = 1;
  for (int i = degree() - 1; i >= 0; --i) {
    bp *= b;
    acc = acc * a + c_[i] * bp;
  }
  return make_rational(acc, bp);
}

int IntPolynomial::sign_at(const Rational& x) const {
  if (c_.empty()) return 0;
  const Integer& a = x.get_num();
  const Integer& b = x.get_den();
  Integer acc = c_.back(), bp = 1;
  for (int i = degree() - 1; i >= 0; --i) {
    bp *= b;
    acc = acc * a + c_[i] * bp;
  }
  return sgn(acc);
}

RatInterval IntPolynomial::eval(const RatInterval& x) const {
  if (c_.empty()) return RatInterval(Rational(0));
  if (x.is_point()) return RatInterval(eval(x.lo));
  RatInterval acc(Rational(c_.back()));
  for (int i = degree() - 1; i >= 0; --i) acc = acc * x + RatInterval(Rational(c_[i]));
  return acc;
}

IntPolynomial IntPolynomial::derivative() const {
  std::vector<Integer> d;
  for (int i = 1; i <= degree(); ++i) d.push_back(c_[i] * i);
  return IntPolynomial(std::move(d));
}

Integer IntPolynomial::content() const {
  Integer g = 0;
  for (const auto& v : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  return g;
}

IntPolynomial IntPolynomial::primitive() const {
  if (c_.empty()) return *this;
  Integer g = content();
  if (lead() < 0) g = -g;
  std::vector<Integer> out;
  for (const auto& v : c_) out.push_back(Integer(v / g));
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::shift(const Integer& k) const {
  std::vector<Integer> a = c_;
  int n = degree();
  // Taylor shift by repeated synthetic division.
  for (int i = 0; i < n; ++i)
    for (int j = n - 1; j >= i; --j) a[j] += k * a[j + 1];
  return IntPolynomial(std::move(a));
}

IntPolynomial IntPolynomial::reverse() const {
  return IntPolynomial(std::vector<Integer>(c_.rbegin(), c_.rend()));
}

IntPolynomial IntPolynomial::negate_var() const {
  std::vector<Integer> a = c_;
  for (std::size_t i = 1; i < a.size(); i += 2) a[i] = -a[i];
  return IntPolynomial(std::move(a));
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Integer> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  return IntPolynomial(std::move(r));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Integer> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
  return IntPolynomial(std::move(r));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Integer> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return IntPolynomial(std::move(r));
}

IntPolynomial operator*(const Integer& k, const IntPolynomial& a) {
  std::vector<Integer> r = a.c_;
  for (auto& v : r) v *= k;
  return IntPolynomial(std::move(r));
}

std::string IntPolynomial::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i] == 0) continue;
    Integer v = c_[i];
    if (!s.empty()) s += v < 0 ? " - " : " + ";
    else if (v < 0) s += "-";
    Integer m = v < 0 ? Integer(-v) : v;
    if (m != 1 || i == 0) s += m.get_str();
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

IntPolynomial prem_primitive(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw PreconditionError("division by the zero polynomial");
  std::vector<Integer> r = a.coeffs();
  const auto& bc = b.coeffs();
  int db = b.degree();
  const Integer& lb = b.lead();
  // Multiplying by lb > 0 keeps the sign of the remainder (needed for Sturm).
  Integer scale = lb < 0 ? Integer(-lb) : lb;
  Integer s = lb < 0 ? Integer(-1) : Integer(1);
  while (static_cast<int>(r.size()) - 1 >= db && !r.empty()) {
    int dr = static_cast<int>(r.size()) - 1;
    Integer lr = r.back();
    // r <- |lb| r - s*lr x^(dr-db) b
    for (auto& v : r) v *= scale;
    for (int i = 0; i <= db; ++i) r[i + dr - db] -= s * lr * bc[i];
    while (!r.empty() && r.back() == 0) r.pop_back();
    if (!r.empty()) {
      IntPolynomial t(r);
      Integer g = t.content();
      if (g > 1)
        for (auto& v : r) v /= g;
    }
  }
  IntPolynomial out(std::move(r));
  Integer g = out.content();
  if (g > 1) {
    std::vector<Integer> c = out.coeffs();
    for (auto& v : c) v /= g;
    out = IntPolynomial(std::move(c));
  }
  return out;
}

IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b) {
  IntPolynomial x = a.primitive(), y = b.primitive();
  while (!y.is_zero()) {
    IntPolynomial r = prem_primitive(x, y);
    x = y;
    y = r.primitive();
  }
  return x.primitive();
}

IntPolynomial exact_div(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw PreconditionError("division by the zero polynomial");
  std::vector<Rational> r(a.coeffs().begin(), a.coeffs().end());
  int db = b.degree();
  int da = a.degree();
  if (da < db) {
    if (a.is_zero()) return {};
    throw PreconditionError("polynomial division is not exact");
  }
  std::vector<Rational> q(static_cast<std::size_t>(da - db + 1));
  for (int i = da; i >= db; --i) {
    Rational t = r[i] / Rational(b.lead());
    q[i - db] = t;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= t * Rational(b.coeffs()[j]);
  }
  for (const auto& v : r)
    if (v != 0) throw PreconditionError("polynomial division is not exact");
  for (const auto& v : q)
    if (v.get_den() != 1) throw PreconditionError("quotient is not integral");
  std::vector<Integer> out;
  for (const auto& v : q) out.push_back(v.get_num());
  return IntPolynomial(std::move(out));
}

bool is_squarefree(const IntPolynomial& p) {
  if (p.is_zero()) return false;
  if (p.degree() <= 1) return true;
  return gcd(p, p.derivative()).degree() == 0;
}

IntPolynomial squarefree_part(const IntPolynomial& p) {
  if (p.degree() <= 1) return p.primitive();
  IntPolynomial g = gcd(p, p.derivative());
  return exact_div(p.primitive(), g).primitive();
}

SturmSequence::SturmSequence(const IntPolynomial& p) {
  if (!is_squarefree(p)) throw PreconditionError("Sturm sequence requires a squarefree polynomial: " + p.to_string());
  chain_.push_back(p);
  if (p.degree() >= 1) chain_.push_back(p.derivative());
  while (chain_.back().degree() > 0) {
    IntPolynomial r = prem_primitive(chain_[chain_.size() - 2], chain_.back());
    if (r.is_zero()) break;
    chain_.push_back((Integer(-1) * r));
  }
}

int SturmSequence::variations(const Rational& x) const {
  int v = 0, last = 0;
  for (const auto& q : chain_) {
    int s = q.sign_at(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int SturmSequence::count(const Rational& lo, const Rational& hi) const {
  if (hi <= lo) return 0;
  return variations(lo) - variations(hi);
}

Rational root_bound(const IntPolynomial& p) {
  if (p.degree() < 1) return 1;
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) {
    Rational r = abs_of(make_rational(p.coeffs()[i], p.lead()));
    if (r > m) m = r;
  }
  Rational b = 1 + m;
  Rational pw = 1;
  while (pw <= b) pw *= 2;
  return pw;
}

}  // namespace formspec
