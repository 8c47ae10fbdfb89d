#pragma once

#include <cstdint>
#include <random>

namespace toasync {

// SplitMix64 mixing step.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Deterministic stream of standard normal deviates.
//
// The (seed, substream, draw index) -> value mapping is frozen for a release:
//   engine = std::mt19937_64 seeded with splitmix64(splitmix64(seed) + substream)
//   each draw consumes two engine outputs e1, e2 and returns
//     u1 = ((e1 >> 11) + 1) * 2^-53      in (0, 1]
//     u2 =  (e2 >> 11)      * 2^-53      in [0, 1)
//     sqrt(-2 ln u1) * cos(2 pi u2)
// mt19937_64 seeding and output are fully specified by the C++ standard, so
// identical (seed, substream) pairs reproduce bit-identical values on any
// platform. Distinct substreams of one seed are independent streams; the
// measurement synthesizer keys the substream by time step.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t substream);

  double next();

 private:
  std::mt19937_64 engine_;
};

}  // namespace toasync
