#include "core/rng.hpp"

#include <cmath>

namespace toasync {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t substream)
    : engine_(splitmix64(splitmix64(seed) + substream)) {}

double NormalStream::next() {
  constexpr double kTwoPow53 = 9007199254740992.0;  // 2^53
  const double u1 = static_cast<double>((engine_() >> 11) + 1) / kTwoPow53;
  const double u2 = static_cast<double>(engine_() >> 11) / kTwoPow53;
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace toasync
