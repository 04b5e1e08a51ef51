#include "formspec/real.hpp"

#include <cmath>

namespace formspec {

struct Real::Node {
  explicit Node(Kind k) : kind(k) {}
  virtual ~Node() = default;
  virtual RatInterval compute(long bits) const = 0;

  RatInterval enclose(long bits) const {
    Rational w = pow2(-bits);
    {
      std::lock_guard<std::mutex> lock(mu);
      if (has && best.width() <= w) return best;
    }
    RatInterval r = compute(bits);
    std::lock_guard<std::mutex> lock(mu);
    if (!has || r.width() < best.width()) {
      best = r;
      has = true;
    }
    return r;
  }

  Kind kind;
  mutable std::mutex mu;
  mutable bool has = false;
  mutable RatInterval best;
};

namespace {

struct RatNode : Real::Node {
  explicit RatNode(Rational v) : Node(Real::Kind::rational), value(std::move(v)) {}
  RatInterval compute(long) const override { return RatInterval(value); }
  Rational value;
};

struct AlgNode : Real::Node {
  explicit AlgNode(AlgebraicReal v) : Node(Real::Kind::algebraic), value(std::move(v)), cur(value) {}
  RatInterval compute(long bits) const override {
    std::lock_guard<std::mutex> lock(amu);
    Rational w = pow2(-bits);
    if (cur.interval().width() > w) cur = cur.refine(w);
    return cur.interval();
  }
  AlgebraicReal value;
  mutable std::mutex amu;
  mutable AlgebraicReal cur;
};

struct QuadNode : Real::Node {
  explicit QuadNode(QuadraticReal v) : Node(Real::Kind::quadratic), value(std::move(v)) {}
  RatInterval compute(long bits) const override { return value.enclose(bits); }
  QuadraticReal value;
};

struct FieldNode : Real::Node {
  explicit FieldNode(FieldElement v) : Node(Real::Kind::field), value(std::move(v)) {}
  RatInterval compute(long bits) const override { return value.enclose(bits); }
  FieldElement value;
};

// Generic adaptive evaluation: raise working precision until the combined
// enclosure is narrow enough.
template <class F>
RatInterval adaptive(long bits, F&& combine) {
  Rational target = pow2(-bits);
  for (long extra = 8;; extra = extra * 2 + 8) {
    RatInterval r = combine(bits + extra);
    if (r.width() <= target) return r;
    RatInterval rr = round_out(r, bits + 2);
    if (rr.width() <= target) return rr;
    if (extra > (1L << 16)) throw UnresolvedError("expression enclosure did not converge");
  }
}

struct BinNode : Real::Node {
  BinNode(Real::Kind k, Real a_, Real b_) : Node(k), a(std::move(a_)), b(std::move(b_)) {}
  RatInterval compute(long bits) const override {
    return adaptive(bits, [&](long w) {
      RatInterval x = a.enclose(w), y;
      switch (kind) {
        case Real::Kind::sum: return round_out(x + b.enclose(w), w + 2);
        case Real::Kind::product: {
          // scale working precision by the other factor's magnitude
          long mx = log2_ceil_mag(x.mag_hi()) + 1;
          y = b.enclose(w + mx);
          long my = log2_ceil_mag(y.mag_hi()) + 1;
          x = a.enclose(w + my);
          return round_out(x * y, w + 2);
        }
        case Real::Kind::quotient: {
          long wb = w;
          y = b.enclose(wb);
          while (y.contains_zero()) {
            wb = wb * 2 + 8;
            if (wb > (1L << 16)) throw UnresolvedError("division by an expression not separated from zero");
            y = b.enclose(wb);
          }
          return round_out(x / y, w + 2);
        }
        default: throw std::logic_error("bad binary node");
      }
    });
  }
  Real a, b;
};

struct UnNode : Real::Node {
  UnNode(Real::Kind k, Real a_) : Node(k), a(std::move(a_)) {}
  RatInterval compute(long bits) const override {
    if (kind == Real::Kind::negation) return -a.enclose(bits);
    return adaptive(bits, [&](long w) {
      RatInterval x = a.enclose(2 * w);
      if (x.hi < 0) throw PreconditionError("sqrt of a negative value");
      if (x.lo < 0) x.lo = 0;
      return sqrt(x, w + 2);
    });
  }
  Real a;
};

}  // namespace

Real::Real() : n_(std::make_shared<RatNode>(Rational(0))) {}
Real::Real(const Rational& q) : n_(std::make_shared<RatNode>(q)) {}
Real::Real(long v) : n_(std::make_shared<RatNode>(Rational(v))) {}

Real::Real(const AlgebraicReal& a) {
  if (a.is_rational()) n_ = std::make_shared<RatNode>(a.rational_value());
  else n_ = std::make_shared<AlgNode>(a);
}

Real::Real(const QuadraticReal& q) {
  if (q.is_rational()) n_ = std::make_shared<RatNode>(q.rational_value());
  else n_ = std::make_shared<QuadNode>(q);
}

Real::Real(const FieldElement& f) {
  if (f.is_rational()) n_ = std::make_shared<RatNode>(f.rational_value());
  else n_ = std::make_shared<FieldNode>(f);
}

Real::Kind Real::kind() const { return n_->kind; }
RatInterval Real::enclose(long bits) const { return n_->enclose(bits); }

std::optional<Rational> Real::exact_rational() const {
  if (n_->kind == Kind::rational) return static_cast<const RatNode&>(*n_).value;
  return std::nullopt;
}

const AlgebraicReal* Real::algebraic() const {
  return n_->kind == Kind::algebraic ? &static_cast<const AlgNode&>(*n_).value : nullptr;
}
const QuadraticReal* Real::quadratic() const {
  return n_->kind == Kind::quadratic ? &static_cast<const QuadNode&>(*n_).value : nullptr;
}
const FieldElement* Real::field_element() const {
  return n_->kind == Kind::field ? &static_cast<const FieldNode&>(*n_).value : nullptr;
}

int Real::sign(long max_bits) const {
  switch (n_->kind) {
    case Kind::rational: return sgn(static_cast<const RatNode&>(*n_).value);
    case Kind::quadratic: return quadratic()->sign();
    case Kind::field: return field_element()->sign();
    case Kind::algebraic: {
      Ordering o = compare(*algebraic(), Rational(0));
      return o == Ordering::less ? -1 : (o == Ordering::greater ? 1 : 0);
    }
    default: break;
  }
  for (long bits = 32;; bits *= 2) {
    int s = enclose(bits).sign();
    if (s != 0) return s;
    if (bits >= max_bits) throw UnresolvedError("sign of expression unresolved at " + std::to_string(bits) + " bits");
  }
}

double Real::approx() const {
  RatInterval r = enclose(64);
  return to_double(r.mid());
}

std::string Real::to_string() const {
  switch (n_->kind) {
    case Kind::rational: return formspec::to_string(static_cast<const RatNode&>(*n_).value);
    case Kind::algebraic: return formspec::to_string(*algebraic());
    case Kind::quadratic: return quadratic()->to_string();
    case Kind::field: return field_element()->to_string();
    default: return to_decimal(enclose(64).mid(), 15);
  }
}

Real Real::operator-() const {
  if (auto q = exact_rational()) return Real(Rational(-*q));
  if (auto q = quadratic()) return Real(-*q);
  if (auto f = field_element()) return Real(-*f);
  if (auto a = algebraic()) return Real(scaled(*a, Rational(-1)));
  return Real(std::make_shared<UnNode>(Kind::negation, *this));
}

static bool same_quadratic_field(const Real& a, const Real& b) {
  auto qa = a.quadratic();
  auto qb = b.quadratic();
  if (qa && qb) return qa->d() == qb->d();
  return (qa && b.exact_rational()) || (qb && a.exact_rational());
}

static QuadraticReal as_quad(const Real& a) {
  if (auto q = a.quadratic()) return *q;
  return QuadraticReal(*a.exact_rational());
}

static bool same_number_field(const Real& a, const Real& b) {
  auto fa = a.field_element();
  auto fb = b.field_element();
  if (fa && fb) return fa->field() == fb->field();
  return (fa && b.exact_rational()) || (fb && a.exact_rational());
}

static FieldElement as_field(const Real& a, const Real& other) {
  if (auto f = a.field_element()) return *f;
  return FieldElement(other.field_element()->field(), *a.exact_rational());
}

Real operator+(const Real& a, const Real& b) {
  auto ra = a.exact_rational(), rb = b.exact_rational();
  if (ra && rb) return Real(Rational(*ra + *rb));
  if (ra && *ra == 0) return b;
  if (rb && *rb == 0) return a;
  if (same_quadratic_field(a, b)) return Real(as_quad(a) + as_quad(b));
  if (same_number_field(a, b)) return Real(as_field(a, b) + as_field(b, a));
  if (a.algebraic() && rb) return Real(shifted(*a.algebraic(), *rb));
  if (b.algebraic() && ra) return Real(shifted(*b.algebraic(), *ra));
  return Real(std::make_shared<BinNode>(Real::Kind::sum, a, b));
}

Real operator-(const Real& a, const Real& b) { return a + (-b); }

Real operator*(const Real& a, const Real& b) {
  auto ra = a.exact_rational(), rb = b.exact_rational();
  if (ra && rb) return Real(Rational(*ra * *rb));
  if ((ra && *ra == 0) || (rb && *rb == 0)) return Real(Rational(0));
  if (ra && *ra == 1) return b;
  if (rb && *rb == 1) return a;
  if (same_quadratic_field(a, b)) return Real(as_quad(a) * as_quad(b));
  if (same_number_field(a, b)) return Real(as_field(a, b) * as_field(b, a));
  if (a.algebraic() && rb) return Real(scaled(*a.algebraic(), *rb));
  if (b.algebraic() && ra) return Real(scaled(*b.algebraic(), *ra));
  return Real(std::make_shared<BinNode>(Real::Kind::product, a, b));
}

Real operator/(const Real& a, const Real& b) {
  auto ra = a.exact_rational(), rb = b.exact_rational();
  if (rb && *rb == 0) throw PreconditionError("division by zero");
  if (ra && rb) return Real(Rational(*ra / *rb));
  if (rb) return a * Real(Rational(1 / *rb));
  if (same_quadratic_field(a, b)) return Real(as_quad(a) / as_quad(b));
  if (same_number_field(a, b)) return Real(as_field(a, b) * as_field(b, a).inverse());
  return Real(std::make_shared<BinNode>(Real::Kind::quotient, a, b));
}

Real sqrt(const Real& a) {
  if (auto r = a.exact_rational()) {
    if (*r < 0) throw PreconditionError("sqrt of a negative rational");
    if (*r == 0) return Real(Rational(0));
    // sqrt(n/m) = sqrt(n m)/m
    Integer nm = r->get_num() * r->get_den();
    return Real(QuadraticReal(Integer(0), Integer(1), nm, r->get_den()));
  }
  return Real(std::make_shared<UnNode>(Real::Kind::sqrt, a));
}

Real abs(const Real& a) { return a.sign() < 0 ? -a : a; }

Real pow(const Real& a, unsigned e) {
  Real r(1L);
  for (unsigned i = 0; i < e; ++i) r = r * a;
  return r;
}

Ordering compare(const Real& a, const Real& b, long max_bits) {
  if (auto qa = a.algebraic()) {
    if (auto qb = b.algebraic()) return compare(*qa, *qb);
    if (auto rb = b.exact_rational()) return compare(*qa, *rb);
  }
  int s = (a - b).sign(max_bits);
  return s < 0 ? Ordering::less : (s > 0 ? Ordering::greater : Ordering::equal);
}

RatInterval enclose_relative(const Real& a, long rel_bits) {
  for (long bits = 32;; bits = bits * 2) {
    RatInterval r = abs(a.enclose(bits));
    if (r.lo > 0 && r.width() <= r.lo * pow2(-rel_bits)) return r;
    if (bits > (1L << 18)) throw UnresolvedError("relative enclosure of a value too close to zero");
  }
}

Integer floor(const Real& a) {
  if (auto q = a.exact_rational()) return floor_of(*q);
  if (auto x = a.algebraic()) return x->floor();
  if (auto x = a.quadratic()) return x->floor();
  for (long bits = 64; bits <= (1L << 12); bits *= 2) {
    RatInterval r = a.enclose(bits);
    Integer k = floor_of(r.lo);
    if (floor_of(r.hi) == k && Rational(k) != r.lo) return k;
  }
  Integer k = floor_of(a.enclose(1L << 12).hi);
  return (a - Real(Rational(k))).sign() >= 0 ? k : Integer(k - 1);
}

}  // namespace formspec
