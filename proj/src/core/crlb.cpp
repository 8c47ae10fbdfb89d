#include "core/crlb.hpp"

#include <cmath>
#include <string>

#include "core/estimator.hpp"

namespace toasync {

namespace {

constexpr double kRankTol = 1e-12;

// Inverse of a 2x2 matrix; throws SingularFimError tagged with `step` when
// the matrix is numerically rank deficient.
Mat inv_2x2(const Mat& m, std::size_t step, const char* what) {
  const SingularValues2 sv = singular_values_2x2(m);
  if (!(sv.min > kRankTol * sv.max) || sv.max == 0.0) {
    throw SingularFimError(step, std::string(what) + " is singular at step " +
                                     std::to_string(step));
  }
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Mat inv(2, 2);
  inv(0, 0) = m(1, 1) / det;
  inv(0, 1) = -m(0, 1) / det;
  inv(1, 0) = -m(1, 0) / det;
  inv(1, 1) = m(0, 0) / det;
  return inv;
}

struct SchurState {
  Mat coupling_sum{2, 2};  // sum of C_l^T I_l^{-1} C_l
  std::size_t k = 0;

  // Adds one step's blocks and returns the bounds for the trajectory so far.
  CrlbValues push(const Mat& i_pos, const Mat& i_pos_bias, double sigma) {
    ++k;
    const Mat i_inv = inv_2x2(i_pos, k, "position information block");
    coupling_sum = coupling_sum + i_pos_bias.transposed() * (i_inv * i_pos_bias);

    Mat schur(2, 2);
    const double corner = 2.0 * static_cast<double>(k) / (sigma * sigma);
    schur(0, 0) = corner - coupling_sum(0, 0);
    schur(0, 1) = -coupling_sum(0, 1);
    schur(1, 0) = -coupling_sum(1, 0);
    schur(1, 1) = corner - coupling_sum(1, 1);
    const Mat schur_inv = inv_2x2(schur, k, "bias Schur complement");

    const Mat pos_cov =
        i_inv + i_inv * (i_pos_bias * (schur_inv * (i_pos_bias.transposed() * i_inv)));
    return CrlbValues{pos_cov(0, 0) + pos_cov(1, 1), schur_inv(0, 0), schur_inv(1, 1)};
  }
};

}  // namespace

FimBlocks::FimBlocks(double sigma_in) : b_bias(2, 2), sigma(sigma_in) {
  if (!(sigma > 0)) {
    throw Error(ErrorCode::InvalidArgument, "fim: sigma must be positive");
  }
}

void FimBlocks::append(const TargetPosition& x, const AnchorArray& a) {
  auto [i_pos_l, i_pos_bias_l] = fim_step_blocks(x, a, sigma);
  i_pos.push_back(std::move(i_pos_l));
  i_pos_bias.push_back(std::move(i_pos_bias_l));
  ++k;
  const double corner = 2.0 * static_cast<double>(k) / (sigma * sigma);
  b_bias(0, 0) = corner;
  b_bias(1, 1) = corner;
}

std::pair<Mat, Mat> fim_step_blocks(const TargetPosition& x, const AnchorArray& a,
                                    double sigma) {
  if (!(sigma > 0)) {
    throw Error(ErrorCode::InvalidArgument, "fim: sigma must be positive");
  }
  const Mat jac = jacobian(x, a);  // throws DegenerateGeometry at an antenna
  const double inv_var = 1.0 / (sigma * sigma);
  const Mat jt = jac.transposed();
  return {inv_var * (jt * jac), inv_var * (jt * bias_matrix())};
}

CrlbValues crlb_at_step(const FimBlocks& blocks) {
  if (blocks.k == 0) {
    throw Error(ErrorCode::InvalidArgument, "crlb: no steps appended");
  }
  SchurState state;
  CrlbValues out{};
  for (std::size_t l = 0; l < blocks.k; ++l) {
    out = state.push(blocks.i_pos[l], blocks.i_pos_bias[l], blocks.sigma);
  }
  return out;
}

std::vector<CrlbValues> crlb_trajectory(std::span<const TargetPosition> trajectory,
                                        const AnchorArray& a, double sigma) {
  if (trajectory.empty()) {
    throw Error(ErrorCode::InvalidArgument, "crlb: empty trajectory");
  }
  std::vector<CrlbValues> out;
  out.reserve(trajectory.size());
  SchurState state;
  for (const TargetPosition& x : trajectory) {
    auto [i_pos, i_pos_bias] = fim_step_blocks(x, a, sigma);
    out.push_back(state.push(i_pos, i_pos_bias, sigma));
  }
  return out;
}

}  // namespace toasync
