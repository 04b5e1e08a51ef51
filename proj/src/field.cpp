#include "formspec/field.hpp"

namespace formspec {

static bool has_rational_root(const IntPolynomial& p) {
  // Any rational root a/b has b | lead; scan the real roots for such values.
  for (const auto& r : isolate_real_roots(p)) {
    if (r.is_rational()) return true;
    Integer l = p.lead() < 0 ? Integer(-p.lead()) : p.lead();
    AlgebraicReal fine = r.refine(Rational(1, 4) / (l * l));
    for (Integer b = 1; b <= l; ++b) {
      if (!mpz_divisible_p(l.get_mpz_t(), b.get_mpz_t())) continue;
      for (Integer a = floor_of(fine.lo() * b); a <= ceil_of(fine.hi() * b); ++a)
        if (p.sign_at(make_rational(a, b)) == 0) return true;
    }
  }
  return false;
}

NumberField::NumberField(const AlgebraicReal& alpha) : alpha_(alpha), best_(alpha) {
  if (alpha.is_rational()) throw PreconditionError("number field generator must be irrational");
  if (alpha.degree() <= 3 && has_rational_root(alpha.minpoly()))
    throw PreconditionError("number field modulus is reducible: " + alpha.minpoly().to_string());
}

RatInterval NumberField::alpha_enclosure(long bits) const {
  Rational w = pow2(-bits);
  std::lock_guard<std::mutex> lock(mu_);
  if (best_.interval().width() > w) best_ = best_.refine(w);
  return best_.interval();
}

FieldElement::FieldElement(std::shared_ptr<const NumberField> k, const Rational& v) : k_(std::move(k)) {
  if (v != 0) c_.push_back(v);
}

FieldElement::FieldElement(std::shared_ptr<const NumberField> k, std::vector<Rational> coeffs)
    : k_(std::move(k)), c_(std::move(coeffs)) {
  reduce();
}

FieldElement FieldElement::generator(std::shared_ptr<const NumberField> k) {
  return FieldElement(std::move(k), std::vector<Rational>{Rational(0), Rational(1)});
}

void FieldElement::reduce() {
  const IntPolynomial& m = k_->modulus();
  int n = m.degree();
  Rational lead(m.lead());
  for (int i = static_cast<int>(c_.size()) - 1; i >= n; --i) {
    if (c_[i] == 0) continue;
    Rational t = c_[i] / lead;
    for (int j = 0; j <= n; ++j) c_[i - n + j] -= t * Rational(m.coeffs()[j]);
  }
  if (static_cast<int>(c_.size()) > n) c_.resize(n);
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational FieldElement::rational_value() const {
  if (!is_rational()) throw PreconditionError("field element is irrational");
  return c_.empty() ? Rational(0) : c_[0];
}

RatInterval FieldElement::enclose(long bits) const {
  if (c_.size() <= 1) return RatInterval(c_.empty() ? Rational(0) : c_[0]);
  // Horner error grows with the coefficient sizes; adapt the generator width.
  long extra = 8;
  for (const auto& c : c_) extra = std::max(extra, log2_ceil_mag(c) + 8);
  for (long w = bits + extra;; w += w / 2 + 16) {
    RatInterval a = k_->alpha_enclosure(w);
    RatInterval acc(c_.back());
    for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i) acc = acc * a + RatInterval(c_[i]);
    acc = round_out(acc, bits + 4);
    if (acc.width() <= pow2(-bits)) return acc;
  }
}

int FieldElement::sign() const {
  if (c_.empty()) return 0;
  if (c_.size() == 1) return sgn(c_[0]);
  for (long bits = 32;; bits *= 2) {
    int s = enclose(bits).sign();
    if (s != 0) return s;
    if (bits > (1L << 20)) throw UnresolvedError("field element sign unresolved");
  }
}

FieldElement FieldElement::operator-() const {
  FieldElement x = *this;
  for (auto& c : x.c_) c = -c;
  return x;
}

static const std::shared_ptr<const NumberField>& pick(const FieldElement& a, const FieldElement& b) {
  if (a.field() && b.field() && a.field() != b.field()) throw PreconditionError("elements of different fields");
  return a.field() ? a.field() : b.field();
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < a.c_.size()) c[i] += a.c_[i];
    if (i < b.c_.size()) c[i] += b.c_[i];
  }
  return FieldElement(pick(a, b), std::move(c));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  if (a.c_.empty() || b.c_.empty()) return FieldElement(pick(a, b), Rational(0));
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return FieldElement(pick(a, b), std::move(c));
}

FieldElement operator*(const Rational& a, const FieldElement& b) {
  std::vector<Rational> c = b.c_;
  for (auto& v : c) v *= a;
  return FieldElement(b.k_, std::move(c));
}

std::string FieldElement::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!s.empty()) s += " + ";
    s += formspec::to_string(c_[i]);
    if (i >= 1) s += "*a";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw PreconditionError("inverse of zero");
  if (is_rational()) return FieldElement(k_, Rational(1 / c_[0]));
  int n = k_->degree();
  // column j = this * alpha^j
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
  FieldElement col = *this, a = generator(k_);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) m[i][j] = i < static_cast<int>(col.c_.size()) ? col.c_[i] : Rational(0);
    col = col * a;
  }
  m[0][n] = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (m[piv][c] == 0) ++piv;
    std::swap(m[c], m[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rational t = m[r][c] / m[c][c];
      for (int k = c; k <= n; ++k) m[r][k] -= t * m[c][k];
    }
  }
  std::vector<Rational> v(n);
  for (int i = 0; i < n; ++i) v[i] = m[i][n] / m[i][i];
  return FieldElement(k_, std::move(v));
}

}  // namespace formspec
