#pragma once

#include "formspec/real.hpp"

#include <functional>
#include <memory>
#include <optional>

namespace formspec {

// Thrown when a lazy expansion hits a digit above the guard and no override
// was requested.
struct DigitGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExpandOptions {
  // Digits larger than this stop algebraic expansions unless allow_huge_digits.
  Integer digit_guard = Integer(1000000);
  bool allow_huge_digits = false;
};

struct Convergent {
  long index;
  Integer p, q;
};

// Continued fraction [a0; a1, a2, ...]. Index 0 is a0. Lazy expansions
// memoize their digits under a per-expansion mutex; copies share the memo.
class CFExpansion {
 public:
  enum class Tail { finite, periodic, lazy };
  struct State;

  static CFExpansion finite(Integer a0, std::vector<Integer> digits);
  static CFExpansion periodic(Integer a0, std::vector<Integer> prefix, std::vector<Integer> block);

  Tail tail() const;
  Integer a0() const { return digit(0); }
  // alpha_i; throws std::out_of_range past the end of a finite expansion.
  Integer digit(long i) const;
  // Highest index available for finite expansions (infinite otherwise).
  std::optional<long> last_index() const;
  bool has_digit(long i) const;
  // alpha_0 .. alpha_upto (truncated at the end of finite expansions).
  std::vector<Integer> digits(long upto) const;
  const std::vector<Integer>& periodic_prefix() const;
  const std::vector<Integer>& periodic_block() const;
  // Exact value when known (always for finite, periodic and expanded values).
  std::optional<Real> value() const;

  // Enclosure of the tail value a_i = [alpha_i; alpha_{i+1}, ...] using digits
  // up to alpha_{i+extra}; extra = 0 gives [alpha_i, alpha_i + 1].
  RatInterval tail_value(long i, long extra = 0) const;

  std::string to_string(long upto) const;

 private:
  friend CFExpansion expand(const AlgebraicReal& x, long depth, const ExpandOptions& opt);
  friend CFExpansion expand(const QuadraticReal& x, long depth, const ExpandOptions& opt);
  friend CFExpansion expand(const Real& x, long depth, const ExpandOptions& opt);
  explicit CFExpansion(std::shared_ptr<State> s) : s_(std::move(s)) {}
  std::shared_ptr<State> s_;
};

CFExpansion expand(const Rational& x, long depth = 0);
CFExpansion expand(const AlgebraicReal& x, long depth, const ExpandOptions& opt = {});
CFExpansion expand(const QuadraticReal& x, long depth, const ExpandOptions& opt = {});
CFExpansion expand(const Real& x, long depth, const ExpandOptions& opt = {});

// Convergents 0..upto by the three-term recurrence.
std::vector<Convergent> convergents(const CFExpansion& cf, long upto);

// Enclosure of |x - p_N/q_N| from the identity with a_{N+1} in
// [alpha_{N+1}, alpha_{N+1} + 1]; exact zero at the last convergent of a rational.
RatInterval approx_error(const CFExpansion& cf, long N);

// (X, Y) is one of the convergents with index <= depth.
bool is_convergent(const CFExpansion& cf, const Integer& X, const Integer& Y, long depth);

// [a0; prefix, block, block, ...] as an exact quadratic irrational (or rational
// never: the block makes the tail infinite).
QuadraticReal assemble(const Integer& a0, const std::vector<Integer>& prefix, const std::vector<Integer>& tail_block);

// Lebesgue measure of the set with the given digits alpha_1..alpha_N and alpha_{N+1} = k.
Rational cylinder_measure(const Integer& a0, const std::vector<Integer>& prefix, const Integer& k);

// Rational enclosure of log(a)/log(b) for integers a >= 1, b >= 2, with
// denominator `den`, decided by exact power comparisons.
RatInterval log_ratio(const Integer& a, const Integer& b, unsigned long den = 1024);

struct ExponentEstimate {
  // 2 + max_i log alpha_i / log Q_{i-1}, labelled as an estimate at `depth`.
  RatInterval value;
  long depth;
  long argmax;  // index i attaining the max (0 when every term is 0)
  // per-index terms log alpha_i / log Q_{i-1}; indices with Q_{i-1} = 1 skipped
  std::vector<std::pair<long, RatInterval>> terms;
  std::string label() const { return "estimate at depth " + std::to_string(depth); }
};

ExponentEstimate dioph_exponent_estimate(const CFExpansion& cf, long depth);

}  // namespace formspec
