#include "sympler/experiments.hpp"

#include "sympler/rng.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace sympler {

namespace {

double sq(double v) { return v * v; }

/// Streams (theta, a_est) pairs through the learner, recording the online
/// squared error and the committee size after each step.
struct StreamRun {
  std::vector<StepTrace> trace;
  std::vector<std::size_t> creation_indices;
};

StreamRun run_stream(SymplerLearner& learner,
                     const std::vector<PendulumRecord>& records) {
  StreamRun run;
  run.trace.reserve(records.size());
  for (std::size_t k = 1; k + 1 < records.size(); ++k) {
    if (!records[k].a_est.has_value()) continue;
    Vector x(1);
    x << records[k].theta;
    const double y = *records[k].a_est;
    const StepOutcome out = step(learner, x, y);

    StepTrace row;
    row.index = run.trace.size();
    row.t = records[k].t;
    row.input = records[k].theta;
    if (out.prediction.has_value()) row.sq_err = sq(y - *out.prediction);
    row.model_count = learner.models.size();
    if (out.model_added) run.creation_indices.push_back(row.index);
    run.trace.push_back(row);
  }
  return run;
}

double mean_sq_err(const std::vector<StepTrace>& trace, double t_begin,
                   double t_end) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const StepTrace& row : trace) {
    if (row.t >= t_begin && row.t < t_end && row.sq_err.has_value()) {
      sum += *row.sq_err;
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const std::size_t n_workers = std::min(jobs, count);
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        body(i);
      }
    });
  }
  for (std::thread& t : workers) t.join();
}

}  // namespace

BaseReport run_base_experiment(const PendulumConfig& cfg,
                               const LearnerConfig& learner_cfg) {
  BaseReport report;
  report.period = measure_period(cfg);
  const auto records = simulate(cfg);

  SymplerLearner learner = make_learner(1, learner_cfg);
  StreamRun run = run_stream(learner, records);
  report.trace = std::move(run.trace);
  report.creation_indices = std::move(run.creation_indices);

  for (const LocalModel& m : learner.models) {
    const TaylorLine line = taylor_line(m.point(0), cfg);
    report.taylor.push_back(
        {m.point(0), m.weights(0), m.weights(1), line.slope, line.bias});
  }
  report.model_count = learner.models.size();
  report.learner = std::move(learner);
  return report;
}

std::vector<std::size_t> creations_per_half_cycle(
    const std::vector<StepTrace>& trace,
    const std::vector<std::size_t>& creation_indices, double period) {
  if (trace.empty()) return {};
  const double half = period / 2.0;
  const auto windows =
      static_cast<std::size_t>(std::floor(trace.back().t / half)) + 1;
  std::vector<std::size_t> counts(windows, 0);
  for (std::size_t idx : creation_indices) {
    const auto w = static_cast<std::size_t>(std::floor(trace[idx].t / half));
    counts[std::min(w, windows - 1)] += 1;
  }
  return counts;
}

double taylor_coefficient_distance(const SymplerLearner& learner,
                                   const PendulumConfig& cfg) {
  if (learner.models.empty()) return 0.0;
  double sum = 0.0;
  for (const LocalModel& m : learner.models) {
    const TaylorLine line = taylor_line(m.point(0), cfg);
    sum += sq(m.weights(0) - line.slope) + sq(m.weights(1) - line.bias);
  }
  return std::sqrt(sum) / static_cast<double>(learner.models.size());
}

AccelModel accel_from_learner(const SymplerLearner& learner) {
  if (learner.models.empty()) {
    throw std::invalid_argument("accel_from_learner: the committee is empty");
  }
  return [frozen = learner](double theta) {
    Vector x(1);
    x << theta;
    return *predict(frozen, x);
  };
}

AccelModel accel_linearized(const PendulumConfig& cfg) {
  const double k = cfg.g / cfg.rod;
  return [k](double theta) { return -k * theta; };
}

AccelModel accel_true(const PendulumConfig& cfg) {
  const double k = cfg.g / cfg.rod;
  return [k](double theta) { return -k * std::sin(theta); };
}

ForecastResult forecast_long_term(const AccelModel& model,
                                  const PendulumConfig& cfg,
                                  double duration_s) {
  if (!(duration_s > 0.0) || !(cfg.dt > 0.0)) {
    throw std::invalid_argument("forecast_long_term: bad duration or dt");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(duration_s / cfg.dt));
  ForecastResult result;
  result.dt = cfg.dt;
  result.theta.resize(steps + 1);

  double theta = cfg.theta0;
  double velocity = cfg.omega0;
  result.theta[0] = theta;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double a = model(theta);
    velocity += a * cfg.dt;
    theta += velocity * cfg.dt;
    result.theta[k] = theta;
  }
  return result;
}

DriftReport run_concept_drift(const PendulumConfig& cfg,
                              const LearnerConfig& learner_cfg,
                              double rod_after) {
  if (!(rod_after > 0.0)) {
    throw std::invalid_argument("run_concept_drift: rod_after must be positive");
  }
  DriftReport report;
  report.period_before = measure_period(cfg);
  const auto steps_a = static_cast<std::size_t>(
      std::ceil(cfg.cycles * report.period_before / cfg.dt));
  const auto records_a = simulate_steps(cfg, steps_a);

  PendulumConfig cfg_b = cfg;
  cfg_b.rod = rod_after;
  cfg_b.theta0 = records_a.back().theta;
  cfg_b.omega0 = records_a.back().omega;
  report.period_after = measure_period(cfg_b);
  const auto steps_b = static_cast<std::size_t>(
      std::ceil(cfg.cycles * report.period_after / cfg.dt));
  const auto records_b = simulate_steps(cfg_b, steps_b);

  // Single continuous angle series; the finite-difference stencils run
  // across the switch exactly as a sensor pipeline would.
  std::vector<PendulumRecord> records(records_a);
  records.reserve(steps_a + steps_b + 1);
  for (std::size_t k = 1; k < records_b.size(); ++k) {
    PendulumRecord r = records_b[k];
    r.t = records_a.back().t + static_cast<double>(k) * cfg.dt;
    records.push_back(r);
  }
  for (std::size_t k = 1; k + 1 < records.size(); ++k) {
    records[k].v_est = (records[k].theta - records[k - 1].theta) / cfg.dt;
    records[k].a_est = (records[k + 1].theta - 2.0 * records[k].theta +
                        records[k - 1].theta) /
                       (cfg.dt * cfg.dt);
  }
  SymplerLearner learner = make_learner(1, learner_cfg);
  StreamRun run = run_stream(learner, records);
  report.trace = std::move(run.trace);
  report.creation_indices = std::move(run.creation_indices);

  report.t_switch = static_cast<double>(steps_a) * cfg.dt;
  // stream index = simulation step - 1, and the target at simulation step k
  // spans k-1..k+1, so the first target touched by the new dynamics is the
  // one at simulation step steps_a
  report.switch_index = steps_a - 1;

  double pre_min = 0.0;
  double pre_max = 0.0;
  bool have_pre = false;
  for (std::size_t i = 0; i < learner.models.size(); ++i) {
    const double p = learner.models[i].point(0);
    report.creation_points.push_back(p);
    if (report.creation_indices[i] < report.switch_index) {
      report.models_before_switch += 1;
      pre_min = have_pre ? std::min(pre_min, p) : p;
      pre_max = have_pre ? std::max(pre_max, p) : p;
      have_pre = true;
    } else {
      report.models_after_switch += 1;
    }
  }
  report.pre_point_min = pre_min;
  report.pre_point_max = pre_max;
  if (have_pre) {
    for (std::size_t i = 0; i < learner.models.size(); ++i) {
      if (report.creation_indices[i] >= report.switch_index) {
        const double p = learner.models[i].point(0);
        if (p >= pre_min && p <= pre_max) {
          report.new_point_in_pre_range = true;
          break;
        }
      }
    }
  }

  const double t_end = report.trace.back().t;
  report.pre_settled_mse =
      mean_sq_err(report.trace, report.period_before, report.t_switch);
  report.final_half_mse = mean_sq_err(
      report.trace, t_end - report.period_after / 2.0, t_end + cfg.dt);
  double peak = 0.0;
  for (const StepTrace& row : report.trace) {
    if (row.t >= report.t_switch &&
        row.t < report.t_switch + report.period_after &&
        row.sq_err.has_value()) {
      peak = std::max(peak, *row.sq_err);
    }
  }
  report.post_switch_max_sq = peak;
  report.learner = std::move(learner);
  return report;
}

HighDimReport run_high_dim(const PendulumConfig& cfg,
                           const LearnerConfig& learner_cfg,
                           const std::vector<std::size_t>& extra_dims,
                           std::size_t reps, std::uint64_t seed,
                           std::size_t jobs) {
  if (reps == 0) throw std::invalid_argument("run_high_dim: reps must be >= 1");
  const double period = measure_period(cfg);
  PendulumConfig sim_cfg = cfg;
  sim_cfg.cycles = cfg.cycles + 1.0;  // one held-out period after training
  const auto records = simulate(sim_cfg);
  const double t_train_end = cfg.cycles * period;

  HighDimReport report;
  report.cells.resize(extra_dims.size());
  for (std::size_t c = 0; c < extra_dims.size(); ++c) {
    report.cells[c].extra_dims = extra_dims[c];
    report.cells[c].test_mse.resize(reps);
    report.cells[c].model_count.resize(reps);
  }

  parallel_for(extra_dims.size() * reps, jobs, [&](std::size_t task) {
    const std::size_t c = task / reps;
    const std::size_t r = task % reps;
    const std::size_t dims = extra_dims[c];
    Rng rng(derive_seed(seed, task));

    SymplerLearner learner =
        make_learner(1 + static_cast<Index>(dims), learner_cfg);
    std::optional<double> prev_y;
    double se_sum = 0.0;
    std::size_t se_count = 0;
    for (std::size_t k = 1; k + 1 < records.size(); ++k) {
      if (!records[k].a_est.has_value()) continue;
      Vector x(1 + static_cast<Index>(dims));
      x(0) = records[k].theta;
      for (std::size_t j = 0; j < dims; ++j) x(1 + static_cast<Index>(j)) = rng.normal();
      const double y = *records[k].a_est;
      if (records[k].t < t_train_end) {
        step(learner, x, y);
      } else {
        const std::optional<double> p = predict(learner, x);
        const double y_hat = p.has_value() ? *p : prev_y.value_or(y);
        se_sum += sq(y - y_hat);
        ++se_count;
      }
      prev_y = y;
    }
    report.cells[c].test_mse[r] =
        se_count == 0 ? 0.0 : se_sum / static_cast<double>(se_count);
    report.cells[c].model_count[r] = learner.models.size();
  });

  for (HighDimCell& cell : report.cells) {
    double mse = 0.0;
    double count = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      mse += cell.test_mse[r];
      count += static_cast<double>(cell.model_count[r]);
    }
    cell.mean_test_mse = mse / static_cast<double>(reps);
    cell.mean_model_count = count / static_cast<double>(reps);
  }
  return report;
}

NoiseReport run_noise_study(const PendulumConfig& cfg,
                            const std::vector<double>& noise_sigmas,
                            const std::vector<double>& lambdas,
                            std::size_t reps, std::uint64_t seed,
                            std::size_t jobs) {
  if (reps == 0) throw std::invalid_argument("run_noise_study: reps must be >= 1");
  const auto records = simulate(cfg);

  NoiseReport report;
  report.cells.resize(noise_sigmas.size() * lambdas.size());
  for (std::size_t i = 0; i < noise_sigmas.size(); ++i) {
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      NoiseCell& cell = report.cells[i * lambdas.size() + j];
      cell.noise_sigma = noise_sigmas[i];
      cell.lambda = lambdas[j];
      cell.distance.resize(reps);
    }
  }

  parallel_for(report.cells.size() * reps, jobs, [&](std::size_t task) {
    const std::size_t c = task / reps;
    const std::size_t r = task % reps;
    NoiseCell& cell = report.cells[c];
    Rng rng(derive_seed(seed, task));

    LearnerConfig lc;
    lc.lambda = cell.lambda;
    SymplerLearner learner = make_learner(1, lc);
    for (std::size_t k = 1; k + 1 < records.size(); ++k) {
      if (!records[k].a_est.has_value()) continue;
      Vector x(1);
      x << records[k].theta;
      step(learner, x, *records[k].a_est + cell.noise_sigma * rng.normal());
    }
    cell.distance[r] = taylor_coefficient_distance(learner, cfg);
  });

  for (NoiseCell& cell : report.cells) {
    double sum = 0.0;
    for (double d : cell.distance) sum += d;
    cell.mean_distance = sum / static_cast<double>(reps);
  }
  return report;
}

}  // namespace sympler
