#include "core/sim.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "core/crlb.hpp"
#include "core/rng.hpp"

namespace toasync {

namespace {

// Substream tag separating trajectory increments from measurement noise
// streams under a shared master seed.
constexpr std::uint64_t kTrajectoryStream = 0x72616a6563746f72ULL;

struct StepAccumulator {
  std::vector<double> pos_sq;
  std::vector<double> b1_sq;
  std::vector<double> b2_sq;
  std::uint64_t flagged = 0;

  explicit StepAccumulator(std::size_t n) : pos_sq(n, 0.0), b1_sq(n, 0.0), b2_sq(n, 0.0) {}

  void add(const StepAccumulator& o) {
    for (std::size_t i = 0; i < pos_sq.size(); ++i) {
      pos_sq[i] += o.pos_sq[i];
      b1_sq[i] += o.b1_sq[i];
      b2_sq[i] += o.b2_sq[i];
    }
    flagged += o.flagged;
  }
};

}  // namespace

std::vector<TargetPosition> generate_trajectory(const TrajectorySpec& spec) {
  if (spec.steps < 1) {
    throw Error(ErrorCode::InvalidArgument, "trajectory: steps must be >= 1");
  }
  if (!(spec.dt > 0)) {
    throw Error(ErrorCode::InvalidArgument, "trajectory: dt must be positive");
  }
  if (spec.speed_std < 0) {
    throw Error(ErrorCode::InvalidArgument, "trajectory: speed_std must be >= 0");
  }
  std::vector<TargetPosition> out;
  out.reserve(spec.steps);
  out.push_back(spec.start);
  const double step_std = spec.speed_std * spec.dt;
  NormalStream stream(spec.seed, kTrajectoryStream);
  for (std::uint64_t k = 1; k < spec.steps; ++k) {
    const double wx = step_std * stream.next();
    const double wy = step_std * stream.next();
    const TargetPosition& prev = out.back();
    out.push_back(TargetPosition{prev.x + wx, prev.y + wy});
  }
  return out;
}

std::vector<StepResult> run_trial(std::span<const TargetPosition> trajectory,
                                  const AnchorArray& anchors, const ClockBias& bias,
                                  double sigma, std::uint64_t trial_seed,
                                  const SolverConfig& solver) {
  Estimator estimator(anchors, solver);
  const NoiseSpec noise{sigma, trial_seed};
  std::vector<StepResult> results;
  results.reserve(trajectory.size());

  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const std::uint64_t k = i + 1;  // true time step keys the noise substream
    MeasurementFrame frame = synthesize(trajectory[i], anchors, bias, noise, k);
    // After a failed step the estimator's step count lags the true time
    // index; restamp so tracking continues on the remaining frames.
    frame.step = estimator.step_count() + 1;
    try {
      results.push_back(estimator.step(frame));
    } catch (const Error&) {
      results.push_back(StepResult{estimator.position(), estimator.bias(), 0, false});
    }
  }
  return results;
}

McReport run_monte_carlo(const TrajectorySpec& traj_spec, const AnchorArray& anchors,
                         const McSpec& mc) {
  if (mc.trials < 1) {
    throw Error(ErrorCode::InvalidArgument, "mc: trials must be >= 1");
  }
  validate(anchors);
  const std::vector<TargetPosition> trajectory = generate_trajectory(traj_spec);
  const std::size_t n = trajectory.size();

  // Fixed chunk grid: the partial-sum combination order depends only on the
  // trial count, not on how many workers happen to run.
  const std::uint64_t chunk_count = std::min<std::uint64_t>(mc.trials, 16);
  const std::uint64_t per_chunk = (mc.trials + chunk_count - 1) / chunk_count;
  std::vector<StepAccumulator> partials(chunk_count, StepAccumulator(n));

  std::atomic<std::uint64_t> next_chunk{0};
  auto worker = [&]() {
    while (true) {
      const std::uint64_t c = next_chunk.fetch_add(1);
      if (c >= chunk_count) return;
      StepAccumulator& acc = partials[c];
      const std::uint64_t begin = c * per_chunk;
      const std::uint64_t end = std::min<std::uint64_t>(begin + per_chunk, mc.trials);
      for (std::uint64_t m = begin; m < end; ++m) {
        const auto results =
            run_trial(trajectory, anchors, mc.bias, mc.sigma,
                      mc.noise_seed_base + m, mc.solver);
        for (std::size_t i = 0; i < n; ++i) {
          const double ex = results[i].position.x - trajectory[i].x;
          const double ey = results[i].position.y - trajectory[i].y;
          acc.pos_sq[i] += ex * ex + ey * ey;
          const double e1 = results[i].bias.b1 - mc.bias.b1;
          const double e2 = results[i].bias.b2 - mc.bias.b2;
          acc.b1_sq[i] += e1 * e1;
          acc.b2_sq[i] += e2 * e2;
          if (!results[i].converged) ++acc.flagged;
        }
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t worker_count =
      std::min<std::size_t>(chunk_count, std::min<std::size_t>(hw, 16));
  std::vector<std::thread> threads;
  threads.reserve(worker_count);
  for (std::size_t t = 0; t < worker_count; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();

  StepAccumulator total(n);
  for (const StepAccumulator& p : partials) total.add(p);

  McReport report;
  report.trajectory = traj_spec;
  report.mc = mc;
  report.anchors = anchors;
  report.pos_rmse.resize(n);
  report.bias1_rmse.resize(n);
  report.bias2_rmse.resize(n);
  const double inv_m = 1.0 / static_cast<double>(mc.trials);
  for (std::size_t i = 0; i < n; ++i) {
    report.pos_rmse[i] = std::sqrt(total.pos_sq[i] * inv_m);
    report.bias1_rmse[i] = std::sqrt(total.b1_sq[i] * inv_m);
    report.bias2_rmse[i] = std::sqrt(total.b2_sq[i] * inv_m);
  }
  report.flagged_steps = total.flagged;

  report.pos_crlb_root.assign(n, 0.0);
  report.bias1_crlb_root.assign(n, 0.0);
  report.bias2_crlb_root.assign(n, 0.0);
  if (mc.sigma > 0) {
    const auto bounds = crlb_trajectory(trajectory, anchors, mc.sigma);
    for (std::size_t i = 0; i < n; ++i) {
      report.pos_crlb_root[i] = std::sqrt(bounds[i].pos);
      report.bias1_crlb_root[i] = std::sqrt(bounds[i].bias1);
      report.bias2_crlb_root[i] = std::sqrt(bounds[i].bias2);
    }
  }
  return report;
}

namespace {

nlohmann::json vec2_json(const Vec2& v) { return nlohmann::json{v.x, v.y}; }

Vec2 vec2_from(const nlohmann::json& j) { return Vec2{j.at(0), j.at(1)}; }

}  // namespace

std::string mc_report_to_json(const McReport& r) {
  nlohmann::json j;
  j["trajectory"] = {{"start", vec2_json(r.trajectory.start)},
                     {"steps", r.trajectory.steps},
                     {"dt", r.trajectory.dt},
                     {"speed_std", r.trajectory.speed_std},
                     {"seed", r.trajectory.seed}};
  j["mc"] = {{"trials", r.mc.trials},
             {"noise_seed_base", r.mc.noise_seed_base},
             {"sigma", r.mc.sigma},
             {"bias", {r.mc.bias.b1, r.mc.bias.b2}},
             {"solver",
              {{"epsilon", r.mc.solver.epsilon},
               {"max_iterations", r.mc.solver.max_iterations},
               {"condition_guard", r.mc.solver.condition_guard}}}};
  j["anchors"] = {{"p11", vec2_json(r.anchors.p11)},
                  {"p12", vec2_json(r.anchors.p12)},
                  {"p21", vec2_json(r.anchors.p21)},
                  {"p22", vec2_json(r.anchors.p22)},
                  {"spacing", r.anchors.spacing}};
  j["pos_rmse"] = r.pos_rmse;
  j["bias1_rmse"] = r.bias1_rmse;
  j["bias2_rmse"] = r.bias2_rmse;
  j["pos_crlb_root"] = r.pos_crlb_root;
  j["bias1_crlb_root"] = r.bias1_crlb_root;
  j["bias2_crlb_root"] = r.bias2_crlb_root;
  j["flagged_steps"] = r.flagged_steps;
  return j.dump();
}

McReport mc_report_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  McReport r;
  const auto& t = j.at("trajectory");
  r.trajectory.start = vec2_from(t.at("start"));
  r.trajectory.steps = t.at("steps");
  r.trajectory.dt = t.at("dt");
  r.trajectory.speed_std = t.at("speed_std");
  r.trajectory.seed = t.at("seed");
  const auto& m = j.at("mc");
  r.mc.trials = m.at("trials");
  r.mc.noise_seed_base = m.at("noise_seed_base");
  r.mc.sigma = m.at("sigma");
  r.mc.bias = ClockBias{m.at("bias").at(0), m.at("bias").at(1)};
  r.mc.solver.epsilon = m.at("solver").at("epsilon");
  r.mc.solver.max_iterations = m.at("solver").at("max_iterations");
  r.mc.solver.condition_guard = m.at("solver").at("condition_guard");
  const auto& a = j.at("anchors");
  r.anchors.p11 = vec2_from(a.at("p11"));
  r.anchors.p12 = vec2_from(a.at("p12"));
  r.anchors.p21 = vec2_from(a.at("p21"));
  r.anchors.p22 = vec2_from(a.at("p22"));
  r.anchors.spacing = a.at("spacing");
  r.pos_rmse = j.at("pos_rmse").get<std::vector<double>>();
  r.bias1_rmse = j.at("bias1_rmse").get<std::vector<double>>();
  r.bias2_rmse = j.at("bias2_rmse").get<std::vector<double>>();
  r.pos_crlb_root = j.at("pos_crlb_root").get<std::vector<double>>();
  r.bias1_crlb_root = j.at("bias1_crlb_root").get<std::vector<double>>();
  r.bias2_crlb_root = j.at("bias2_crlb_root").get<std::vector<double>>();
  r.flagged_steps = j.at("flagged_steps");
  return r;
}

}  // namespace toasync
