#pragma once

#include "sympler/learner.hpp"
#include "sympler/pendulum.hpp"
#include "sympler/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace sympler {

/// One row of an online-training trace.
struct StepTrace {
  std::size_t index = 0;  ///< stream position
  double t = 0.0;         ///< simulation time of the input sample
  double input = 0.0;     ///< the angle fed to the learner
  std::optional<double> sq_err;  ///< squared online prediction error
  std::size_t model_count = 0;
};

/// Fitted coefficients of one local model next to the analytical tangent
/// line at its approximation point.
struct TaylorCheck {
  double point = 0.0;
  double slope = 0.0;
  double bias = 0.0;
  double taylor_slope = 0.0;
  double taylor_bias = 0.0;
};

struct BaseReport {
  double period = 0.0;
  std::vector<StepTrace> trace;
  std::vector<std::size_t> creation_indices;
  std::vector<TaylorCheck> taylor;
  std::size_t model_count = 0;
  SymplerLearner learner;
};

/// Streams (theta(k) -> estimated acceleration(k)) pairs from a cfg.cycles
/// simulation through a fresh learner.
BaseReport run_base_experiment(const PendulumConfig& cfg,
                               const LearnerConfig& learner_cfg);

/// Model creations bucketed into consecutive half-period windows of the
/// trace.
std::vector<std::size_t> creations_per_half_cycle(
    const std::vector<StepTrace>& trace,
    const std::vector<std::size_t>& creation_indices, double period);

/// Norm of the concatenated (slope, bias) differences between the fitted
/// local models and the tangent lines at their approximation points,
/// normalized by the model count. Zero for an empty committee.
double taylor_coefficient_distance(const SymplerLearner& learner,
                                   const PendulumConfig& cfg);

/// Acceleration model used in closed-loop forecasting: angle -> angular
/// acceleration.
using AccelModel = std::function<double(double)>;

/// Wraps a frozen learner copy. Throws if the committee is empty.
AccelModel accel_from_learner(const SymplerLearner& learner);
AccelModel accel_linearized(const PendulumConfig& cfg);
AccelModel accel_true(const PendulumConfig& cfg);

struct ForecastResult {
  double dt = 0.0;
  std::vector<double> theta;  ///< theta[k] at t = k*dt; theta[0] = theta0
};

/// Closed-loop rollout from (theta0, omega0): each step estimates the
/// acceleration at the previously predicted angle, integrates it into the
/// velocity, then advances the angle (semi-implicit Euler in that order).
ForecastResult forecast_long_term(const AccelModel& model,
                                  const PendulumConfig& cfg,
                                  double duration_s);

struct DriftReport {
  double period_before = 0.0;
  double period_after = 0.0;
  double t_switch = 0.0;
  std::size_t switch_index = 0;  ///< first stream index with a post-switch target
  std::vector<StepTrace> trace;
  std::vector<std::size_t> creation_indices;
  std::vector<double> creation_points;
  std::size_t models_before_switch = 0;
  std::size_t models_after_switch = 0;
  double pre_point_min = 0.0;
  double pre_point_max = 0.0;
  bool new_point_in_pre_range = false;
  double pre_settled_mse = 0.0;     ///< mean sq err, second pre-switch period
  double post_switch_max_sq = 0.0;  ///< max sq err within one period after the switch
  double final_half_mse = 0.0;      ///< mean sq err over the last half period
  SymplerLearner learner;
};

/// Trains continuously across an instantaneous rod-length change, with the
/// pendulum state carried over. cfg.cycles periods are simulated per
/// dynamics regime.
DriftReport run_concept_drift(const PendulumConfig& cfg,
                              const LearnerConfig& learner_cfg,
                              double rod_after);

struct HighDimCell {
  std::size_t extra_dims = 0;
  std::vector<double> test_mse;           ///< per repetition
  std::vector<std::size_t> model_count;   ///< per repetition
  double mean_test_mse = 0.0;
  double mean_model_count = 0.0;
};

struct HighDimReport {
  std::vector<HighDimCell> cells;
};

/// Augments the angle input with standard-normal spurious variables, trains
/// over cfg.cycles periods and evaluates frozen over one further period.
HighDimReport run_high_dim(const PendulumConfig& cfg,
                           const LearnerConfig& learner_cfg,
                           const std::vector<std::size_t>& extra_dims,
                           std::size_t reps, std::uint64_t seed,
                           std::size_t jobs = 1);

struct NoiseCell {
  double noise_sigma = 0.0;
  double lambda = 0.0;
  std::vector<double> distance;  ///< per repetition
  double mean_distance = 0.0;
};

struct NoiseReport {
  std::vector<NoiseCell> cells;
};

/// Adds zero-mean Gaussian noise to the acceleration targets and measures
/// how far the fitted coefficients drift from the tangent lines, per
/// (noise level, regularization) cell.
NoiseReport run_noise_study(const PendulumConfig& cfg,
                            const std::vector<double>& noise_sigmas,
                            const std::vector<double>& lambdas,
                            std::size_t reps, std::uint64_t seed,
                            std::size_t jobs = 1);

}  // namespace sympler
