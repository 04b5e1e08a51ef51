#pragma once

#include <cstdint>
#include <random>

namespace testutil {

// Fixed-seed generator; range reduction by rejection so values are
// identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do v = g_(); while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }
  double unit() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 g_;
};

}  // namespace testutil
