#include "sympler/baselines.hpp"

#include "sympler/learner.hpp"

#include <stdexcept>

namespace sympler {

std::optional<double> naive_step(NaivePredictor& p, double y) {
  const std::optional<double> forecast = p.prev_y;
  p.prev_y = y;
  return forecast;
}

OfflineRidge fit_offline_ridge(const std::vector<Sample>& samples,
                               double lambda) {
  const LocalModel fitted = fit_local_model(samples, lambda);
  return {fitted.weights, lambda};
}

double predict(const OfflineRidge& model, const Vector& x) {
  if (x.size() + 1 != model.weights.size()) {
    throw std::invalid_argument("predict(OfflineRidge): dimension mismatch");
  }
  return model.weights.head(x.size()).dot(x) + model.weights(x.size());
}

double linearized_pendulum_accel(double theta, double g, double rod) {
  if (!(rod > 0.0)) {
    throw std::invalid_argument("linearized_pendulum_accel: rod must be positive");
  }
  return -(g / rod) * theta;
}

}  // namespace sympler
