#include "core/model.hpp"

#include <cmath>
#include <string>

#include "core/rng.hpp"

namespace toasync {

namespace {

double dist(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::array<Vec2, 4> antennas(const AnchorArray& a) { return {a.p11, a.p12, a.p21, a.p22}; }

void validate(const AnchorArray& a) {
  if (!(a.spacing > 0)) {
    throw Error(ErrorCode::InvalidArgument, "anchors: spacing must be positive");
  }
  constexpr double kTol = 1e-9;
  if (std::abs(dist(a.p11, a.p12) - a.spacing) > kTol) {
    throw Error(ErrorCode::InvalidArgument,
                "anchors: |p11 - p12| inconsistent with spacing");
  }
  if (std::abs(dist(a.p21, a.p22) - a.spacing) > kTol) {
    throw Error(ErrorCode::InvalidArgument,
                "anchors: |p21 - p22| inconsistent with spacing");
  }
  if (!(dist(a.p11, a.p21) > a.spacing)) {
    throw Error(ErrorCode::InvalidArgument, "anchors: receivers are co-located");
  }
}

std::array<double, 4> range_vector(const TargetPosition& x, const AnchorArray& a) {
  std::array<double, 4> r{};
  const auto ps = antennas(a);
  for (std::size_t i = 0; i < 4; ++i) r[i] = dist(x, ps[i]);
  return r;
}

Mat bias_matrix() {
  return Mat(4, 2, {1, 0, 1, 0, 0, 1, 0, 1});
}

MeasurementFrame synthesize(const TargetPosition& x, const AnchorArray& a,
                            const ClockBias& bias, const NoiseSpec& noise,
                            std::uint64_t step) {
  const auto ranges = range_vector(x, a);
  std::array<double, 4> z = {ranges[0] + bias.b1, ranges[1] + bias.b1,
                             ranges[2] + bias.b2, ranges[3] + bias.b2};
  if (noise.sigma > 0) {
    NormalStream stream(noise.seed, step);
    for (double& v : z) v += noise.sigma * stream.next();
  }
  return MeasurementFrame{z[0], z[1], z[2], z[3], step};
}

}  // namespace toasync
