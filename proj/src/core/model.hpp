#pragma once

#include <array>
#include <cstdint>

#include "core/mat.hpp"

namespace toasync {

struct Vec2 {
  double x = 0;
  double y = 0;
};

using TargetPosition = Vec2;

// Two fixed dual-antenna receivers. Antenna j of receiver i sits at p_ij;
// the two antennas of each receiver are `spacing` apart.
struct AnchorArray {
  Vec2 p11, p12, p21, p22;
  double spacing = 0;
};

// Antennas in measurement order (p11, p12, p21, p22).
std::array<Vec2, 4> antennas(const AnchorArray& a);

// Throws Error(InvalidArgument) when the stated geometry is inconsistent:
// spacing must be positive and match both antenna pairs to 1e-9, and the two
// receivers must be farther apart than the antenna spacing.
void validate(const AnchorArray& a);

// Relative clock offsets of the two receivers, expressed in range units
// (offset times propagation speed), so they add directly onto ranges.
struct ClockBias {
  double b1 = 0;
  double b2 = 0;
};

// Biased noisy ranges observed at the four antennas at one time step
// (1-based step index).
struct MeasurementFrame {
  double z11 = 0;
  double z12 = 0;
  double z21 = 0;
  double z22 = 0;
  std::uint64_t step = 1;
};

struct NoiseSpec {
  double sigma = 0;
  std::uint64_t seed = 0;
};

// True ranges [|x-p11|, |x-p12|, |x-p21|, |x-p22|].
std::array<double, 4> range_vector(const TargetPosition& x, const AnchorArray& a);

// The 4x2 pattern mapping (b1, b2) onto the four range measurements:
// rows (1,0), (1,0), (0,1), (0,1).
Mat bias_matrix();

// z = ranges + bias pattern * b + noise, with the four noise channels drawn
// independently from the (seed, step) substream of NormalStream (channel
// order z11, z12, z21, z22). sigma = 0 yields exact biased ranges.
MeasurementFrame synthesize(const TargetPosition& x, const AnchorArray& a,
                            const ClockBias& bias, const NoiseSpec& noise,
                            std::uint64_t step);

}  // namespace toasync
