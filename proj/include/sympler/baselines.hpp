#pragma once

#include "sympler/types.hpp"

#include <optional>
#include <vector>

namespace sympler {

/// Naive delayed predictor: forecasts the next target to equal the last
/// observed one. Undefined before the first observation.
struct NaivePredictor {
  std::optional<double> prev_y;
};

/// Returns the current naive forecast (nullopt on the first call), then
/// absorbs the revealed target.
std::optional<double> naive_step(NaivePredictor& p, double y);

/// Frozen batch ridge regression: fitted once, never updated.
struct OfflineRidge {
  Vector weights;  ///< length n+1, bias last
  double lambda = 0.0;
};

OfflineRidge fit_offline_ridge(const std::vector<Sample>& samples,
                               double lambda = 1e-6);

double predict(const OfflineRidge& model, const Vector& x);

/// Small-angle pendulum model: acceleration -(g/rod) * theta. Valid near
/// the hanging equilibrium only.
double linearized_pendulum_accel(double theta, double g, double rod);

}  // namespace sympler
