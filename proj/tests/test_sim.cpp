#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/sim.hpp"
#include "oracles.hpp"

using namespace toasync;

namespace {

const AnchorArray kPaperAnchors{{-51, -100}, {-49, -100}, {49, -100}, {51, -100}, 2.0};

TrajectorySpec desk_traj(std::uint64_t steps, std::uint64_t seed) {
  TrajectorySpec t;
  t.start = {0, 50};
  t.steps = steps;
  t.dt = 0.5;
  t.speed_std = 0.5;
  t.seed = seed;
  return t;
}

double pos_err(const TargetPosition& a, const TargetPosition& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

TEST_CASE("zero speed keeps the trajectory at the start") {
  TrajectorySpec t = desk_traj(20, 5);
  t.speed_std = 0;
  for (const TargetPosition& p : generate_trajectory(t)) {
    CHECK(p.x == 0.0);
    CHECK(p.y == 50.0);
  }
}

TEST_CASE("trajectories are deterministic under a fixed seed") {
  const auto a = generate_trajectory(desk_traj(500, 77));
  const auto b = generate_trajectory(desk_traj(500, 77));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }
  const auto c = generate_trajectory(desk_traj(500, 78));
  CHECK(a[1].x != c[1].x);
}

TEST_CASE("per-axis increment std tracks speed_std * dt") {
  const auto traj = generate_trajectory(desk_traj(3000, 9));
  double sx = 0, sy = 0;
  const std::size_t n = traj.size() - 1;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double dx = traj[i].x - traj[i - 1].x;
    const double dy = traj[i].y - traj[i - 1].y;
    sx += dx * dx;
    sy += dy * dy;
  }
  const double want = 0.25;  // 0.5 m/s over 0.5 s
  CHECK(std::abs(std::sqrt(sx / n) - want) < 0.05 * want);
  CHECK(std::abs(std::sqrt(sy / n) - want) < 0.05 * want);
}

TEST_CASE("trajectory specs are validated") {
  TrajectorySpec t = desk_traj(0, 1);
  CHECK_THROWS_AS(generate_trajectory(t), Error);
  t = desk_traj(10, 1);
  t.dt = 0;
  CHECK_THROWS_AS(generate_trajectory(t), Error);
  t = desk_traj(10, 1);
  t.speed_std = -1;
  CHECK_THROWS_AS(generate_trajectory(t), Error);
}

TEST_CASE("noise-free trials track exactly from step 2") {
  const auto traj = generate_trajectory(desk_traj(40, 3));
  // Iterated to convergence: with the loose real-time tolerance a walk step
  // that lands under epsilon freezes a slightly offset linearization.
  SolverConfig solver;
  solver.epsilon = 1e-9;
  solver.max_iterations = 8;
  const auto results = run_trial(traj, kPaperAnchors, ClockBias{5, -5}, 0.0, 1, solver);
  REQUIRE(results.size() == traj.size());
  for (std::size_t i = 1; i < results.size(); ++i) {
    CHECK(pos_err(results[i].position, traj[i]) < 1e-6);
  }
}

TEST_CASE("identical trial inputs give identical outputs") {
  const auto traj = generate_trajectory(desk_traj(30, 4));
  const auto a = run_trial(traj, kPaperAnchors, ClockBias{5, -5}, 1e-2, 17, SolverConfig{});
  const auto b = run_trial(traj, kPaperAnchors, ClockBias{5, -5}, 1e-2, 17, SolverConfig{});
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].position.x == b[i].position.x);
    CHECK(a[i].position.y == b[i].position.y);
    CHECK(a[i].bias.b1 == b[i].bias.b1);
    CHECK(a[i].iterations == b[i].iterations);
  }
}

TEST_CASE("flipping the bias signs leaves position errors statistically unchanged") {
  const auto traj = generate_trajectory(desk_traj(100, 6));
  double mean_a = 0, mean_b = 0;
  const int trials = 50;
  for (int m = 0; m < trials; ++m) {
    const auto ra =
        run_trial(traj, kPaperAnchors, ClockBias{5, -5}, 1e-2, 100 + m, SolverConfig{});
    const auto rb =
        run_trial(traj, kPaperAnchors, ClockBias{-5, 5}, 1e-2, 100 + m, SolverConfig{});
    for (std::size_t i = 0; i < traj.size(); ++i) {
      mean_a += pos_err(ra[i].position, traj[i]);
      mean_b += pos_err(rb[i].position, traj[i]);
    }
  }
  CHECK(std::abs(mean_a - mean_b) < 0.02 * std::max(mean_a, mean_b));
}

TEST_CASE("single-trial report is that trial's per-step error") {
  TrajectorySpec t = desk_traj(25, 8);
  McSpec mc;
  mc.trials = 1;
  mc.noise_seed_base = 313;
  mc.bias = {5, -5};
  mc.sigma = 1e-2;
  const McReport report = run_monte_carlo(t, kPaperAnchors, mc);

  const auto traj = generate_trajectory(t);
  const auto results = run_trial(traj, kPaperAnchors, mc.bias, mc.sigma, 313, mc.solver);
  REQUIRE(report.pos_rmse.size() == traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(report.pos_rmse[i] ==
          doctest::Approx(pos_err(results[i].position, traj[i])).epsilon(1e-12));
    CHECK(report.bias1_rmse[i] ==
          doctest::Approx(std::abs(results[i].bias.b1 - 5.0)).epsilon(1e-12));
  }
}

TEST_CASE("zero-noise monte carlo collapses to the deterministic error") {
  TrajectorySpec t = desk_traj(20, 10);
  McSpec mc;
  mc.trials = 4;
  mc.noise_seed_base = 1;
  mc.bias = {5, -5};
  mc.sigma = 0.0;
  mc.solver.epsilon = 1e-9;
  mc.solver.max_iterations = 8;
  const McReport report = run_monte_carlo(t, kPaperAnchors, mc);
  for (std::size_t i = 1; i < report.pos_rmse.size(); ++i) {
    CHECK(report.pos_rmse[i] < 1e-6);
    CHECK(report.bias1_rmse[i] < 1e-6);
  }
  // No bound is defined at sigma = 0; the columns are zero by contract.
  for (double v : report.pos_crlb_root) CHECK(v == 0.0);
}

TEST_CASE("report rmse matches a naive recomputation from stored errors") {
  TrajectorySpec t = desk_traj(15, 11);
  McSpec mc;
  mc.trials = 7;
  mc.noise_seed_base = 900;
  mc.bias = {5, -5};
  mc.sigma = 1e-2;
  const McReport report = run_monte_carlo(t, kPaperAnchors, mc);

  const auto traj = generate_trajectory(t);
  std::vector<double> pos_sq(traj.size(), 0.0), b1_sq(traj.size(), 0.0);
  for (std::uint64_t m = 0; m < mc.trials; ++m) {
    const auto results =
        run_trial(traj, kPaperAnchors, mc.bias, mc.sigma, mc.noise_seed_base + m, mc.solver);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double e = pos_err(results[i].position, traj[i]);
      pos_sq[i] += e * e;
      const double eb = results[i].bias.b1 - mc.bias.b1;
      b1_sq[i] += eb * eb;
    }
  }
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(report.pos_rmse[i] ==
          doctest::Approx(std::sqrt(pos_sq[i] / mc.trials)).epsilon(1e-12));
    CHECK(report.bias1_rmse[i] ==
          doctest::Approx(std::sqrt(b1_sq[i] / mc.trials)).epsilon(1e-12));
  }
}

TEST_CASE("trials are exchangeable across seed orderings") {
  const auto traj = generate_trajectory(desk_traj(12, 21));
  const std::vector<std::uint64_t> seeds{4, 9, 1, 7, 3};
  std::vector<std::uint64_t> reversed(seeds.rbegin(), seeds.rend());

  auto final_errors = [&](const std::vector<std::uint64_t>& order) {
    std::vector<double> out;
    for (std::uint64_t s : order) {
      const auto r = run_trial(traj, kPaperAnchors, ClockBias{5, -5}, 1e-2, s, SolverConfig{});
      out.push_back(pos_err(r.back().position, traj.back()));
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  const auto a = final_errors(seeds);
  const auto b = final_errors(reversed);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("reports round-trip losslessly through json") {
  TrajectorySpec t = desk_traj(10, 33);
  McSpec mc;
  mc.trials = 3;
  mc.noise_seed_base = 71;
  mc.bias = {5, -5};
  mc.sigma = 1e-2;
  mc.solver.epsilon = 0.01;
  const McReport report = run_monte_carlo(t, kPaperAnchors, mc);

  const McReport back = mc_report_from_json(mc_report_to_json(report));
  CHECK(back.trajectory.steps == report.trajectory.steps);
  CHECK(back.trajectory.seed == report.trajectory.seed);
  CHECK(back.trajectory.start.x == report.trajectory.start.x);
  CHECK(back.mc.trials == report.mc.trials);
  CHECK(back.mc.noise_seed_base == report.mc.noise_seed_base);
  CHECK(back.mc.sigma == report.mc.sigma);
  CHECK(back.mc.solver.epsilon == report.mc.solver.epsilon);
  CHECK(back.anchors.p11.x == report.anchors.p11.x);
  CHECK(back.anchors.spacing == report.anchors.spacing);
  CHECK(back.flagged_steps == report.flagged_steps);
  REQUIRE(back.pos_rmse.size() == report.pos_rmse.size());
  for (std::size_t i = 0; i < report.pos_rmse.size(); ++i) {
    CHECK(back.pos_rmse[i] == report.pos_rmse[i]);
    CHECK(back.bias1_rmse[i] == report.bias1_rmse[i]);
    CHECK(back.bias2_rmse[i] == report.bias2_rmse[i]);
    CHECK(back.pos_crlb_root[i] == report.pos_crlb_root[i]);
    CHECK(back.bias1_crlb_root[i] == report.bias1_crlb_root[i]);
    CHECK(back.bias2_crlb_root[i] == report.bias2_crlb_root[i]);
  }
}

TEST_CASE("flagged steps are counted and still enter the rmse") {
  TrajectorySpec t = desk_traj(10, 44);
  McSpec mc;
  mc.trials = 3;
  mc.noise_seed_base = 5;
  mc.bias = {5, -5};
  mc.sigma = 1e-2;
  mc.solver.condition_guard = 1.0;  // trips on every step in this geometry
  const McReport report = run_monte_carlo(t, kPaperAnchors, mc);
  CHECK(report.flagged_steps == t.steps * mc.trials);
  // Bias never gets solved, so its RMSE stays at the true magnitude.
  CHECK(report.bias1_rmse.back() == doctest::Approx(5.0).epsilon(1e-12));
}
