#include "formspec/forms.hpp"

#include <algorithm>
#include <sstream>

namespace formspec {

namespace {

bool is_zero(const Rational& q) { return q == 0; }
bool is_zero(const Real& r) {
  auto q = r.exact_rational();
  return q && *q == 0;
}

// Leibniz expansion organized as a DP over used-column sets: no division, so
// it works over any commutative ring. Sizes here stay below 2^12 states.
template <class T>
T det_dp(const std::vector<std::vector<T>>& m, const T& zero) {
  std::size_t n = m.size();
  std::vector<T> dp(std::size_t(1) << n, zero);
  std::vector<bool> live(dp.size(), false);
  dp[0] = T(1L);
  live[0] = true;
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (!live[mask]) continue;
    std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (row == n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (std::size_t(1) << j)) continue;
      if (is_zero(m[row][j])) continue;
      int inv = __builtin_popcountll(mask >> (j + 1));
      T term = dp[mask] * m[row][j];
      std::size_t nm = mask | (std::size_t(1) << j);
      if (inv % 2)
        dp[nm] = T(dp[nm] - term);
      else
        dp[nm] = T(dp[nm] + term);
      live[nm] = true;
    }
  }
  return dp.back();
}

// Discriminant of sum c_i z^i (c_n != 0).
template <class T>
T poly_discriminant(const std::vector<T>& c, const T& zero) {
  int n = static_cast<int>(c.size()) - 1;
  if (n == 1) return T(1L);
  std::vector<T> d(n);
  for (int i = 1; i <= n; ++i) d[i - 1] = T(static_cast<long>(i)) * c[i];
  int sz = 2 * n - 1;
  std::vector<std::vector<T>> m(sz, std::vector<T>(sz, zero));
  for (int r = 0; r < n - 1; ++r)
    for (int k = 0; k <= n; ++k) m[r][r + k] = c[n - k];
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= n - 1; ++k) m[n - 1 + r][r + k] = d[n - 1 - k];
  T res = det_dp(m, zero);
  long s = ((n * (n - 1) / 2) % 2) ? -1 : 1;
  return T(T(T(s) * res) / c[n]);
}

// Coefficients of f(al x + be y, ga x + de y).
template <class T>
std::vector<T> substitute(const std::vector<T>& c, const T& al, const T& be, const T& ga, const T& de,
                          const T& zero) {
  int n = static_cast<int>(c.size()) - 1;
  auto mul = [&](const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> out(a.size() + b.size() - 1, zero);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return out;
  };
  std::vector<std::vector<T>> lp{{T(1L)}}, mp{{T(1L)}};
  for (int i = 1; i <= n; ++i) {
    lp.push_back(mul(lp.back(), {be, al}));
    mp.push_back(mul(mp.back(), {de, ga}));
  }
  std::vector<T> out(n + 1, zero);
  for (int i = 0; i <= n; ++i) {
    if (is_zero(c[i])) continue;
    auto t = mul(lp[i], mp[n - i]);
    for (int k = 0; k <= n; ++k) out[k] = out[k] + c[i] * t[k];
  }
  return out;
}

// sign(x - r y) for integers, exact whenever compare(Real, Real) is.
int side(const Integer& x, const Integer& y, const Real& r) {
  if (y == 0) return sign_of(x);
  Ordering o = compare(Real(make_rational(x, y)), r);
  int s = o == Ordering::less ? -1 : (o == Ordering::greater ? 1 : 0);
  return y > 0 ? s : -s;
}

}  // namespace

// ---------------------------------------------------------------- BinaryForm

BinaryForm::BinaryForm(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  if (c_.size() < 3) throw PreconditionError("binary form needs degree >= 2");
  if (std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; }))
    throw PreconditionError("binary form is identically zero");
}

BinaryForm BinaryForm::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw PreconditionError("form text needs 'n: c_n ... c_0'");
  Integer n = parse_integer(std::string_view(text).substr(0, colon));
  std::istringstream in(text.substr(colon + 1));
  std::vector<Rational> desc;
  std::string tok;
  while (in >> tok) desc.push_back(parse_rational(tok));
  if (n < 2) throw PreconditionError("form text: degree must be >= 2, got " + n.get_str());
  if (desc.size() != n.get_ui() + 1)
    throw PreconditionError("form text: degree " + n.get_str() + " needs " + Integer(n + 1).get_str() +
                            " coefficients, got " + std::to_string(desc.size()));
  std::reverse(desc.begin(), desc.end());
  return BinaryForm(std::move(desc));
}

BinaryForm BinaryForm::descending(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  std::reverse(v.begin(), v.end());
  return BinaryForm(std::move(v));
}

Rational BinaryForm::eval(const Rational& x, const Rational& y) const {
  Rational acc = 0, ypow = 1;
  std::vector<Rational> yp(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    yp[i] = ypow;
    ypow *= y;
  }
  // Horner in x with the y powers attached: sum c_i x^i y^(n-i)
  int n = degree();
  for (int i = n; i >= 0; --i) acc = acc * x + c_[i] * yp[n - i];
  return acc;
}

IntPolynomial BinaryForm::dehomogenized() const { return IntPolynomial::from_rationals(c_).primitive(); }

Integer BinaryForm::denominator_lcm() const {
  Integer l = 1;
  for (const auto& q : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  return l;
}

BinaryForm BinaryForm::scaled(const Rational& k) const {
  if (k == 0) throw PreconditionError("scaling a form by zero");
  std::vector<Rational> v = c_;
  for (auto& q : v) q *= k;
  return BinaryForm(std::move(v));
}

std::string BinaryForm::to_text() const {
  std::string s = std::to_string(degree()) + ":";
  for (int i = degree(); i >= 0; --i) s += " " + formspec::to_string(c_[i]);
  return s;
}

Rational discriminant(const BinaryForm& f) {
  int n = f.degree();
  std::vector<Rational> c = f.coeffs();
  if (c[n] == 0) {
    if (c[0] != 0) {
      std::reverse(c.begin(), c.end());
    } else {
      // shear y -> y + k x; f(1, k) != 0 for some k <= n + 1
      for (long k = 1;; ++k) {
        auto s = substitute<Rational>(c, Rational(1), Rational(0), Rational(k), Rational(1), Rational(0));
        if (s[n] != 0) {
          c = s;
          break;
        }
      }
    }
  }
  return poly_discriminant<Rational>(c, Rational(0));
}

Rational cubic_discriminant(const BinaryForm& f) {
  if (f.degree() != 3) throw PreconditionError("cubic discriminant needs a cubic");
  const Rational &a = f.coeff(3), &b = f.coeff(2), &c = f.coeff(1), &d = f.coeff(0);
  return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
}

// ----------------------------------------------------------------- Transform

Transform Transform::identity() { return rational(1, 0, 0, 1); }

Transform Transform::rational(const Rational& a, const Rational& b, const Rational& c, const Rational& d,
                              bool allow_gl) {
  Rational det = a * d - b * c;
  if (det != 1 && !(allow_gl && det == -1))
    throw PreconditionError("transform determinant is " + formspec::to_string(det) + ", expected 1");
  Transform t;
  t.e_ = {Real(a), Real(b), Real(c), Real(d)};
  t.det_ = det == 1 ? 1 : -1;
  return t;
}

Transform Transform::real(Real a, Real b, Real c, Real d, bool allow_gl) {
  Real det = a * d - b * c;
  RatInterval de = det.enclose(128);
  auto is_exactly = [&](long v) {
    if (!de.contains(Rational(v))) return false;
    try {
      return (det - Real(v)).sign(1L << 10) == 0;
    } catch (const UnresolvedError&) {
      return true;  // equal to within 2^-1024
    }
  };
  Transform t;
  if (is_exactly(1))
    t.det_ = 1;
  else if (allow_gl && is_exactly(-1))
    t.det_ = -1;
  else
    throw PreconditionError("transform is not unimodular (det ~ " + to_decimal(de.mid(), 12) + ")");
  t.e_ = {std::move(a), std::move(b), std::move(c), std::move(d)};
  return t;
}

Transform Transform::diagonal(const Rational& theta) {
  if (theta <= 0) throw PreconditionError("diagonal transform needs theta > 0");
  Transform t;
  Real s = sqrt(Real(theta));
  t.e_ = {s, Real(0L), Real(0L), Real(1L) / s};
  t.theta_ = theta;
  return t;
}

bool Transform::is_rational() const {
  return std::all_of(e_.begin(), e_.end(), [](const Real& r) { return r.exact_rational().has_value(); });
}

std::array<Rational, 4> Transform::rational_entries() const {
  if (!is_rational()) throw PreconditionError("transform has irrational entries");
  return {*e_[0].exact_rational(), *e_[1].exact_rational(), *e_[2].exact_rational(), *e_[3].exact_rational()};
}

Real Transform::apply(const Real& z) const { return (a() * z + b()) / (c() * z + d()); }

Transform Transform::operator*(const Transform& o) const {
  Transform t;
  t.e_ = {a() * o.a() + b() * o.c(), a() * o.b() + b() * o.d(), c() * o.a() + d() * o.c(),
          c() * o.b() + d() * o.d()};
  t.det_ = det_ * o.det_;
  if (theta_ && o.theta_) t.theta_ = *theta_ * *o.theta_;
  return t;
}

Transform Transform::inverse() const {
  Transform t;
  Real k(static_cast<long>(det_));
  t.e_ = {k * d(), -(k * b()), -(k * c()), k * a()};
  t.det_ = det_;
  if (theta_) t.theta_ = 1 / *theta_;
  return t;
}

RatInterval Transform::distance_to_identity(long bits) const {
  std::array<Real, 4> diff = {a() - Real(1L), b(), c(), d() - Real(1L)};
  Rational lo = 0, hi = 0;
  for (const auto& x : diff) {
    RatInterval e = abs(x.enclose(bits));
    lo = std::max(lo, e.lo);
    hi = std::max(hi, e.hi);
  }
  return {lo, hi};
}

std::string Transform::to_string() const {
  return "[[" + a().to_string() + ", " + b().to_string() + "], [" + c().to_string() + ", " + d().to_string() + "]]";
}

BinaryForm act(const BinaryForm& f, const Transform& T) {
  auto [a, b, c, d] = T.rational_entries();
  Rational det = a * d - b * c;
  auto s = substitute<Rational>(f.coeffs(), d / det, -b / det, -c / det, a / det, Rational(0));
  return BinaryForm(std::move(s));
}

// --------------------------------------------------------------------- roots

RootProfile real_roots(const BinaryForm& f) {
  if (discriminant(f) == 0) throw PreconditionError("repeated root: the discriminant of " + f.to_text() + " is zero");
  RootProfile p;
  p.degree = f.degree();
  p.real_roots = isolate_real_roots(f.dehomogenized());
  std::reverse(p.real_roots.begin(), p.real_roots.end());
  p.real_count = static_cast<int>(p.real_roots.size());
  return p;
}

Real root_as_real(const AlgebraicReal& r) {
  if (r.is_rational()) return Real(r.rational_value());
  if (r.degree() == 2) {
    const auto& c = r.minpoly().coeffs();
    Integer disc = c[1] * c[1] - 4 * c[2] * c[0];
    for (long s : {1L, -1L}) {
      QuadraticReal q(Integer(-c[1]), Integer(s), disc, Integer(2 * c[2]));
      if (compare(quadratic_to_algebraic(q), r) == Ordering::equal) return Real(q);
    }
  }
  return Real(r);
}

RatInterval normalized_minimum(const RatInterval& disc, int degree, const RatInterval& m, long bits) {
  if (disc.contains_zero()) throw PreconditionError("normalized minimum needs a nonzero discriminant");
  if (m.lo < 0) throw PreconditionError("normalized minimum needs m >= 0");
  if (m.hi == 0) return RatInterval(Rational(0));
  unsigned k = static_cast<unsigned>(2 * degree - 2);
  RatInterval root = nth_root(abs(disc), k, bits + 8);
  return m / root;
}

RatInterval normalized_minimum(const BinaryForm& f, const Rational& m, long bits) {
  Rational d = discriminant(f);
  if (d == 0) throw PreconditionError("normalized minimum needs a nonzero discriminant");
  return normalized_minimum(RatInterval(d), f.degree(), RatInterval(m), bits);
}

// ------------------------------------------------------------------ RealForm

RealForm::RealForm(const BinaryForm& f) : RealForm(Real(1L), f) {}

RealForm::RealForm(Real outer, const BinaryForm& inner) : n_(inner.degree()), outer_(std::move(outer)), inner_(inner) {
  if (is_zero(outer_)) throw PreconditionError("form scaled by zero");
  for (const auto& c : inner.coeffs()) coeffs_.push_back(outer_ * Real(c));
}

RealForm RealForm::factored(Real scale, std::vector<Real> roots, std::vector<std::pair<Real, Real>> quads) {
  RealForm f;
  f.n_ = static_cast<int>(roots.size() + 2 * quads.size());
  if (f.n_ < 2) throw PreconditionError("binary form needs degree >= 2");
  if (is_zero(scale)) throw PreconditionError("form scaled by zero");
  for (const auto& [p, q] : quads)
    if ((p * p - Real(4L) * q).sign() >= 0) throw PreconditionError("quadratic factor is not definite");
  std::sort(roots.begin(), roots.end(), [](const Real& a, const Real& b) {
    Ordering o = compare(a, b);
    if (o == Ordering::equal) throw PreconditionError("repeated root in factored form");
    return o == Ordering::greater;
  });
  f.factored_ = true;
  f.scale_ = std::move(scale);
  f.roots_ = std::move(roots);
  f.quads_ = std::move(quads);
  f.expand_coefficients();
  return f;
}

RealForm RealForm::expanded(std::vector<Real> coeffs) {
  RealForm f;
  if (coeffs.size() < 3) throw PreconditionError("binary form needs degree >= 2");
  f.n_ = static_cast<int>(coeffs.size()) - 1;
  f.coeffs_ = std::move(coeffs);
  return f;
}

void RealForm::expand_coefficients() {
  std::vector<Real> acc{scale_};
  auto mul = [&](const std::vector<Real>& b) {
    std::vector<Real> out(acc.size() + b.size() - 1, Real(0L));
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + acc[i] * b[j];
    acc = std::move(out);
  };
  for (const auto& r : roots_) mul({-r, Real(1L)});
  for (const auto& [p, q] : quads_) mul({q, p, Real(1L)});
  for (auto& c : acc) c = outer_ * c;
  coeffs_ = std::move(acc);
}

std::optional<BinaryForm> RealForm::exact() const {
  std::vector<Rational> c;
  for (const auto& x : coeffs_) {
    auto q = x.exact_rational();
    if (!q) return std::nullopt;
    c.push_back(*q);
  }
  return BinaryForm(std::move(c));
}

Real RealForm::value(const Integer& x, const Integer& y) const {
  Real X{Rational(x)}, Y{Rational(y)};
  if (inner_) return outer_ * Real(inner_->eval(x, y));
  if (factored_) {
    Real v = outer_ * scale_;
    for (const auto& r : roots_) v = v * (X - Y * r);
    for (const auto& [p, q] : quads_) v = v * (X * X + p * X * Y + q * Y * Y);
    return v;
  }
  Real acc(0L);
  for (int i = n_; i >= 0; --i) acc = acc * X + coeffs_[i] * Real(Rational(ipow(y, n_ - i)));
  return acc;
}

int RealForm::sign_at(const Integer& x, const Integer& y) const {
  if (x == 0 && y == 0) return 0;
  if (inner_) return outer_.sign() * sign_of(inner_->eval(x, y));
  if (factored_) {
    int s = outer_.sign() * scale_.sign();
    for (const auto& r : roots_) s *= side(x, y, r);
    return s;  // definite quadratics are positive off the origin
  }
  return value(x, y).sign();
}

std::vector<Real> RealForm::real_roots() const {
  if (factored_) return roots_;
  if (inner_) {
    std::vector<Real> out;
    for (const auto& r : formspec::real_roots(*inner_).real_roots) out.push_back(root_as_real(r));
    return out;
  }
  throw PreconditionError("real roots of an expanded real form are not tracked");
}

Real RealForm::discriminant() const {
  Real k = pow(outer_, static_cast<unsigned>(2 * n_ - 2));
  if (inner_) return k * Real(formspec::discriminant(*inner_));
  if (factored_) {
    Real d = k * pow(scale_, static_cast<unsigned>(2 * n_ - 2));
    for (std::size_t i = 0; i < roots_.size(); ++i)
      for (std::size_t j = i + 1; j < roots_.size(); ++j) d = d * pow(roots_[i] - roots_[j], 2);
    for (std::size_t i = 0; i < quads_.size(); ++i) {
      const auto& [p, q] = quads_[i];
      d = d * (p * p - Real(4L) * q);
      for (const auto& r : roots_) d = d * pow(r * r + p * r + q, 2);
      for (std::size_t j = i + 1; j < quads_.size(); ++j) {
        const auto& [p2, q2] = quads_[j];
        Real res = pow(q - q2, 2) + (p - p2) * (p * q2 - p2 * q);
        d = d * pow(res, 2);
      }
    }
    return d;
  }
  std::vector<Real> c = coeffs_;
  if (c[n_].sign() == 0) std::reverse(c.begin(), c.end());
  if (c[n_].sign() == 0) throw PreconditionError("discriminant of an expanded form with roots 0 and infinity");
  return poly_discriminant<Real>(c, Real(0L));
}

RealForm RealForm::act(const Transform& T) const {
  if (inner_ && T.is_rational()) return RealForm(outer_, formspec::act(*inner_, T));
  if (inner_ && T.theta()) {
    const Rational& th = *T.theta();
    std::vector<Rational> c = inner_->coeffs();
    for (int i = 0; i <= n_; ++i) c[i] *= rpow(th, n_ - i);
    Real k = n_ % 2 == 0 ? Real(rpow(th, -n_ / 2)) : Real(rpow(th, -(n_ + 1) / 2)) * sqrt(Real(th));
    return RealForm(outer_ * k, BinaryForm(std::move(c)));
  }
  Real det(static_cast<long>(T.det_sign()));
  Real al = T.d() / det, be = -T.b() / det, ga = -T.c() / det, de = T.a() / det;
  if (factored_) {
    bool ok = true;
    Real s = scale_;
    std::vector<Real> roots;
    std::vector<std::pair<Real, Real>> quads;
    for (const auto& r : roots_) {
      Real lead = al - r * ga;
      if (lead.sign() == 0) {
        ok = false;
        break;
      }
      s = s * lead;
      roots.push_back((r * de - be) / lead);
    }
    for (const auto& [p, q] : quads_) {
      if (!ok) break;
      Real A = al * al + p * al * ga + q * ga * ga;
      Real B = Real(2L) * al * be + p * (al * de + be * ga) + Real(2L) * q * ga * de;
      Real C = be * be + p * be * de + q * de * de;
      s = s * A;
      quads.emplace_back(B / A, C / A);
    }
    if (ok) {
      RealForm f = factored(outer_ * s, std::move(roots), std::move(quads));
      return f;
    }
  }
  auto c = substitute<Real>(coeffs_, al, be, ga, de, Real(0L));
  RealForm f = expanded(std::move(c));
  return f;
}

RealForm RealForm::scaled(const Real& k) const {
  RealForm f = *this;
  f.outer_ = outer_ * k;
  for (auto& c : f.coeffs_) c = k * c;
  f.hints_ = {};
  if (auto q = k.exact_rational()) {
    Rational m = abs_of(*q);
    if (hints_.global_lower) f.hints_.global_lower = *hints_.global_lower * m;
    if (hints_.near_root_lower) {
      auto inner = hints_.near_root_lower;
      f.hints_.near_root_lower = [inner, m](std::size_t i, const RatInterval& reg) -> std::optional<Rational> {
        auto b = inner(i, reg);
        if (b) return *b * m;
        return std::nullopt;
      };
    }
    f.hints_.note = hints_.note;
  }
  return f;
}

RealForm RealForm::with_hints(FormHints h) const {
  RealForm f = *this;
  f.hints_ = std::move(h);
  return f;
}

std::string RealForm::to_string() const {
  if (auto e = exact()) return e->to_text();
  std::string s = std::to_string(n_) + ": ~";
  for (int i = n_; i >= 0; --i) s += " " + to_decimal(coeffs_[i].enclose(64).mid(), 12);
  return s;
}

RealForm from_roots(const std::vector<Real>& reals, const std::vector<std::array<Real, 3>>& quads,
                    const Rational& scale) {
  Real s(scale);
  std::vector<std::pair<Real, Real>> q;
  for (const auto& [A, B, C] : quads) {
    if (A.sign() <= 0 || (B * B - Real(4L) * A * C).sign() >= 0)
      throw PreconditionError("quadratic factor is not positive definite");
    s = s * A;
    q.emplace_back(B / A, C / A);
  }
  return RealForm::factored(s, reals, std::move(q));
}

}  // namespace formspec
