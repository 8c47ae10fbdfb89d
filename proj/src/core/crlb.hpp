#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "core/mat.hpp"
#include "core/model.hpp"

namespace toasync {

// Fisher information of the accumulated measurement log-likelihood, kept in
// its natural block-arrow layout: one 2x2 position block and one 2x2
// position-bias coupling per step, plus the diagonal bias corner block.
struct FimBlocks {
  explicit FimBlocks(double sigma);

  void append(const TargetPosition& x, const AnchorArray& a);

  std::vector<Mat> i_pos;       // I_l, 2x2 symmetric PSD, units 1/m^2
  std::vector<Mat> i_pos_bias;  // coupling of x_l with (b1, b2), 2x2
  Mat b_bias;                   // 2x2 diagonal, entries 2k/sigma^2
  std::size_t k = 0;
  double sigma = 0;
};

// Position block (1/sigma^2) J(x)^T J(x) and coupling (1/sigma^2) J(x)^T A
// for one step; these are the sums of squared and cross direction cosines
// over the four antennas. Requires sigma > 0 and x away from every antenna.
std::pair<Mat, Mat> fim_step_blocks(const TargetPosition& x, const AnchorArray& a,
                                    double sigma);

// Estimation variance floors, in m^2. pos is the trace of the current
// position's 2x2 covariance block.
struct CrlbValues {
  double pos = 0;
  double bias1 = 0;
  double bias2 = 0;
};

// Bounds at the latest appended step, via the Schur complement of the bias
// corner: S = B_k - sum_l C_l^T I_l^{-1} C_l, bias variances from S^{-1},
// and the position block I_k^{-1} + I_k^{-1} C_k S^{-1} C_k^T I_k^{-1}.
// Algebraically identical to inverting the full (2k+2)-dim arrow matrix.
// Throws SingularFimError when any step block or S is rank deficient.
CrlbValues crlb_at_step(const FimBlocks& blocks);

// Per-step bounds along a trajectory of true positions. Running sums keep the
// total cost linear in the number of steps; output[j] equals crlb_at_step on
// the first j+1 positions.
std::vector<CrlbValues> crlb_trajectory(std::span<const TargetPosition> trajectory,
                                        const AnchorArray& a, double sigma);

}  // namespace toasync
