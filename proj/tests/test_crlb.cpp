#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/crlb.hpp"
#include "core/estimator.hpp"
#include "oracles.hpp"

using namespace toasync;

namespace {

const AnchorArray kPaperAnchors{{-51, -100}, {-49, -100}, {49, -100}, {51, -100}, 2.0};

// Expected information of the Gaussian range model, with every mean
// derivative taken by central differences: (1/sigma^2) D^T D over the
// stacked parameter (x, y, b1, b2).
Mat fd_fim_full(const TargetPosition& x, const AnchorArray& a, double sigma) {
  const double h = 1e-6;
  Mat d(4, 4);  // measurement channel x parameter
  const Mat fd_pos = oracle::fd_jacobian(x, a, h);
  for (std::size_t r = 0; r < 4; ++r) {
    d(r, 0) = fd_pos(r, 0);
    d(r, 1) = fd_pos(r, 1);
  }
  // Bias derivatives by the same finite-difference route on the mean model.
  const auto ranges = range_vector(x, a);
  for (std::size_t r = 0; r < 4; ++r) {
    const double db1 = (r < 2) ? 1.0 : 0.0;
    const double db2 = (r < 2) ? 0.0 : 1.0;
    const double plus1 = ranges[r] + db1 * h, minus1 = ranges[r] - db1 * h;
    const double plus2 = ranges[r] + db2 * h, minus2 = ranges[r] - db2 * h;
    d(r, 2) = (plus1 - minus1) / (2 * h);
    d(r, 3) = (plus2 - minus2) / (2 * h);
  }
  return (1.0 / (sigma * sigma)) * (d.transposed() * d);
}

FimBlocks stationary_blocks(const TargetPosition& x, std::size_t k, double sigma) {
  FimBlocks blocks(sigma);
  for (std::size_t i = 0; i < k; ++i) blocks.append(x, kPaperAnchors);
  return blocks;
}

}  // namespace

TEST_CASE("step blocks equal the Jacobian products") {
  oracle::Uniform u(2024);
  for (int rep = 0; rep < 100; ++rep) {
    const TargetPosition x{u.next(-90, 90), u.next(5, 95)};
    const double sigma = u.next(1e-3, 1e-1);
    const auto [i_pos, i_pos_bias] = fim_step_blocks(x, kPaperAnchors, sigma);

    const Mat j = jacobian(x, kPaperAnchors);
    const double w = 1.0 / (sigma * sigma);
    const Mat want_pos = w * (j.transposed() * j);
    const Mat want_cpl = w * (j.transposed() * bias_matrix());

    const double scale = std::max(1.0, want_pos.max_abs());
    CHECK((i_pos - want_pos).max_abs() <= 1e-12 * scale);
    CHECK((i_pos_bias - want_cpl).max_abs() <= 1e-12 * std::max(1.0, want_cpl.max_abs()));

    // symmetry and positive semidefiniteness of the position block
    CHECK(i_pos(0, 1) == i_pos(1, 0));
    CHECK(i_pos(0, 0) >= 0.0);
    CHECK(i_pos(0, 0) * i_pos(1, 1) - i_pos(0, 1) * i_pos(1, 0) >= -1e-9 * scale * scale);
  }
}

TEST_CASE("step blocks match a finite-difference information oracle") {
  const TargetPosition x{0, 50};
  const double sigma = 1e-2;
  const auto [i_pos, i_pos_bias] = fim_step_blocks(x, kPaperAnchors, sigma);
  const Mat fd = fd_fim_full(x, kPaperAnchors, sigma);

  const double scale = fd.max_abs();
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(std::abs(i_pos(i, j) - fd(i, j)) < 1e-6 * scale);
      CHECK(std::abs(i_pos_bias(i, j) - fd(i, 2 + j)) < 1e-6 * scale);
    }
  }
}

TEST_CASE("step blocks validate their inputs") {
  CHECK_THROWS_AS(fim_step_blocks(TargetPosition{0, 50}, kPaperAnchors, 0.0), Error);
  try {
    fim_step_blocks(TargetPosition{-51, -100}, kPaperAnchors, 1e-2);
    FAIL("expected DegenerateGeometry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateGeometry);
  }
}

TEST_CASE("bias corner entries are exactly 2k over sigma squared") {
  const double sigma = 0.02;
  FimBlocks blocks(sigma);
  for (std::size_t k = 1; k <= 5; ++k) {
    blocks.append(TargetPosition{0, 50}, kPaperAnchors);
    CHECK(blocks.b_bias(0, 0) == 2.0 * k / (sigma * sigma));
    CHECK(blocks.b_bias(1, 1) == 2.0 * k / (sigma * sigma));
    CHECK(blocks.b_bias(0, 1) == 0.0);
  }
}

TEST_CASE("schur-path bounds equal dense arrow inversion") {
  for (std::uint64_t scenario = 0; scenario < 6; ++scenario) {
    const oracle::Scenario sc = oracle::random_scenario(9000 + scenario);
    oracle::Uniform walk(9100 + scenario);
    FimBlocks blocks(sc.sigma);
    TargetPosition x = sc.start;
    for (std::size_t k = 1; k <= 8; ++k) {
      blocks.append(x, sc.anchors);
      const CrlbValues fast = crlb_at_step(blocks);
      const CrlbValues dense = oracle::dense_crlb(blocks);
      CHECK(std::abs(fast.pos - dense.pos) < 1e-8 * std::abs(dense.pos));
      CHECK(std::abs(fast.bias1 - dense.bias1) < 1e-8 * std::abs(dense.bias1));
      CHECK(std::abs(fast.bias2 - dense.bias2) < 1e-8 * std::abs(dense.bias2));
      x.x += walk.next(-1, 1);
      x.y += walk.next(-1, 1);
    }
  }
}

TEST_CASE("doubling sigma scales every bound by four") {
  const TargetPosition x{10, 40};
  const CrlbValues base = crlb_at_step(stationary_blocks(x, 4, 0.01));
  const CrlbValues doubled = crlb_at_step(stationary_blocks(x, 4, 0.02));
  CHECK(doubled.pos == doctest::Approx(4.0 * base.pos).epsilon(1e-12));
  CHECK(doubled.bias1 == doctest::Approx(4.0 * base.bias1).epsilon(1e-12));
  CHECK(doubled.bias2 == doctest::Approx(4.0 * base.bias2).epsilon(1e-12));
}

TEST_CASE("bias bounds decrease strictly for a stationary target") {
  const TargetPosition x{0, 50};
  const double sigma = 1e-2;
  std::vector<TargetPosition> traj(100, x);
  const auto bounds = crlb_trajectory(traj, kPaperAnchors, sigma);
  REQUIRE(bounds.size() == 100);
  for (std::size_t i = 1; i < bounds.size(); ++i) {
    CHECK(bounds[i].bias1 < bounds[i - 1].bias1);
    CHECK(bounds[i].bias2 < bounds[i - 1].bias2);
  }
  for (const CrlbValues& v : bounds) {
    CHECK(v.pos > 0.0);
    CHECK(v.bias1 > 0.0);
    CHECK(v.bias2 > 0.0);
  }

  // Dense-oracle cross-check at k = 1, 10, 100.
  for (std::size_t k : {std::size_t{1}, std::size_t{10}, std::size_t{100}}) {
    const CrlbValues dense = oracle::dense_crlb(stationary_blocks(x, k, sigma));
    CHECK(bounds[k - 1].bias1 == doctest::Approx(dense.bias1).epsilon(1e-8));
    CHECK(bounds[k - 1].bias2 == doctest::Approx(dense.bias2).epsilon(1e-8));
    CHECK(bounds[k - 1].pos == doctest::Approx(dense.pos).epsilon(1e-8));
  }

  // Repeating one geometry scales the whole information matrix by k, so the
  // bias bound decays exactly like 1/k.
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const double scaled = bounds[i].bias1 * static_cast<double>(i + 1);
    CHECK(scaled == doctest::Approx(bounds[0].bias1).epsilon(1e-10));
  }
}

TEST_CASE("trajectory bounds agree with per-prefix evaluation") {
  const oracle::Scenario sc = oracle::random_scenario(314);
  oracle::Uniform walk(315);
  std::vector<TargetPosition> traj;
  TargetPosition x = sc.start;
  for (int k = 0; k < 12; ++k) {
    traj.push_back(x);
    x.x += walk.next(-1, 1);
    x.y += walk.next(-1, 1);
  }
  const auto bounds = crlb_trajectory(traj, sc.anchors, sc.sigma);
  FimBlocks blocks(sc.sigma);
  for (std::size_t j = 0; j < traj.size(); ++j) {
    blocks.append(traj[j], sc.anchors);
    const CrlbValues prefix = crlb_at_step(blocks);
    CHECK(bounds[j].pos == doctest::Approx(prefix.pos).epsilon(1e-14));
    CHECK(bounds[j].bias1 == doctest::Approx(prefix.bias1).epsilon(1e-14));
    CHECK(bounds[j].bias2 == doctest::Approx(prefix.bias2).epsilon(1e-14));
  }

  SUBCASE("length-1 trajectory equals a single step") {
    const std::vector<TargetPosition> one{traj[0]};
    const auto single = crlb_trajectory(one, sc.anchors, sc.sigma);
    FimBlocks b1(sc.sigma);
    b1.append(traj[0], sc.anchors);
    const CrlbValues direct = crlb_at_step(b1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].pos == direct.pos);
    CHECK(single[0].bias1 == direct.bias1);
  }
}

TEST_CASE("collinear geometry is reported as singular information") {
  // All antennas and the target on one line: every direction cosine is
  // (+-1, 0) and the position block has rank 1.
  AnchorArray line{{0, 0}, {2, 0}, {10, 0}, {12, 0}, 2.0};
  FimBlocks blocks(1e-2);
  try {
    blocks.append(TargetPosition{30, 0}, line);
    crlb_at_step(blocks);
    FAIL("expected SingularFim");
  } catch (const SingularFimError& e) {
    CHECK(e.code() == ErrorCode::SingularFim);
    CHECK(e.step() == 1);
  }

  // The trajectory path tags the failing step as well.
  std::vector<TargetPosition> traj{{30, 0}};
  CHECK_THROWS_AS(crlb_trajectory(traj, line, 1e-2), SingularFimError);
}

TEST_CASE("empty inputs are rejected") {
  CHECK_THROWS_AS(crlb_at_step(FimBlocks(1e-2)), Error);
  CHECK_THROWS_AS(crlb_trajectory(std::vector<TargetPosition>{}, kPaperAnchors, 1e-2),
                  Error);
  CHECK_THROWS_AS(FimBlocks(-1.0), Error);
}
