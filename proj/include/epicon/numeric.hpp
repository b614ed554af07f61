#pragma once

#include <cmath>
#include <cstdint>

namespace epicon {

/// Ceiling that ignores floating noise just above an integer, so that
/// e.g. 0.6 * 5 == 3.0000000000000004 yields 3 rather than 4.
inline std::int64_t ceil_count(double x) {
  constexpr double kSlack = 1e-9;
  return static_cast<std::int64_t>(std::ceil(x - kSlack));
}

/// splitmix64 finalizer; used to derive independent per-cell/per-trial seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                    std::uint64_t b = 0) {
  return mix64(mix64(mix64(base) ^ a) ^ (b * 0xd1342543de82ef95ULL));
}

}  // namespace epicon
