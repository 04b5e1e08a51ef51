#pragma once

#include "formspec/cf.hpp"
#include "formspec/forms.hpp"

#include <optional>
#include <utility>

namespace formspec {

using Point = std::pair<Integer, Integer>;

struct MinResult {
  Real value{0L};          // exact |f(attaining)|, or 0 for an empty search
  RatInterval enclosure;   // of value
  std::optional<Point> attaining;
  long box_bound = 0;
  long cf_depth = 0;
  bool certified = false;
  std::string certificate_note;

  std::optional<Rational> exact_value() const { return value.exact_rational(); }
};

struct RootMinResult {
  Real value{0L};
  RatInterval enclosure;
  int degree = 0;
  std::optional<long> attaining_index;  // convergent index
  long depth = 0;
};

struct Candidate {
  Integer x, y;
  RatInterval value;   // |f(x, y)|
  std::size_t root;    // index into the descending real roots
  long index;          // convergent index
};

struct MinOptions {
  long box = 100;
  long depth = 30;
  std::optional<Rational> eta;  // default (n - 2) / 2
  // worker threads for box scans; 0 picks hardware concurrency
  unsigned threads = 0;
};

// Exhaustive scan of 0 < max(|x|, |y|) <= T. Slow but simple; the tests use
// it as the oracle.
MinResult brute_force_min(const BinaryForm& f, long T, unsigned threads = 0);
MinResult brute_force_min(const RealForm& f, long T, unsigned threads = 0);

std::vector<Candidate> convergent_candidates(const BinaryForm& f, long depth);
std::vector<Candidate> convergent_candidates(const RealForm& f, long depth);

MinResult m_estimate(const BinaryForm& f, const MinOptions& opt = {});
MinResult m_estimate(const RealForm& f, const MinOptions& opt = {});

// inf over Y <= Q_depth of |Y^n (X/Y - rho)|, attained at a convergent.
RootMinResult m_rho(const Real& rho, int n, long depth);

// Order used to pick among equal minima: y first, then |x|, positive x
// before negative. Points are normalized to y > 0 or (y = 0, x > 0).
Point normalize(const Point& p);
bool tie_less(const Point& a, const Point& b);

}  // namespace formspec
