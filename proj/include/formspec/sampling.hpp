#pragma once

#include "formspec/rational.hpp"

#include <cstdint>

namespace formspec {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based: sample k of stream `seed` does not depend on any other sample,
// so loops can be split across threads and merged by index.
inline Rational dyadic_sample(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t v = splitmix64(splitmix64(seed) ^ (k * 0xd1b54a32d192ed03ULL)) >> 11;
  return make_rational(Integer(static_cast<unsigned long>(v)), Integer(1) << 53);
}

inline Rational sample_in(const Rational& lo, const Rational& hi, std::uint64_t seed, std::uint64_t k) {
  return lo + (hi - lo) * dyadic_sample(seed, k);
}

}  // namespace formspec
