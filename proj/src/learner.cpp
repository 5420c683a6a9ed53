#include "sympler/learner.hpp"

#include "sympler/vc_bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace sympler {

namespace {

void require_dim(const Vector& x, Index n, const char* where) {
  if (x.size() != n) {
    throw std::invalid_argument(std::string(where) + ": input has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(n));
  }
}

void require_finite(const Vector& x, double y, const char* where) {
  if (!x.allFinite() || !std::isfinite(y)) {
    throw std::invalid_argument(std::string(where) + ": non-finite sample");
  }
}

double sq(double v) { return v * v; }

}  // namespace

std::string to_string(Selection s) {
  switch (s) {
    case Selection::Nearest: return "nearest";
    case Selection::Aggregated: return "aggregated";
    case Selection::ErrorBased: return "error_based";
  }
  throw std::logic_error("to_string: unknown selection");
}

Selection selection_from_string(const std::string& name) {
  if (name == "nearest") return Selection::Nearest;
  if (name == "aggregated") return Selection::Aggregated;
  if (name == "error_based") return Selection::ErrorBased;
  throw std::invalid_argument("unknown selection mode: " + name);
}

double predict(const LocalModel& model, const Vector& x) {
  require_dim(x, model.point.size(), "predict(LocalModel)");
  const Index n = x.size();
  return model.weights.head(n).dot(x) + model.weights(n);
}

SymplerLearner make_learner(Index n, const LearnerConfig& config) {
  if (n < 1) throw std::invalid_argument("make_learner: need n >= 1 inputs");
  if (!(config.lambda > 0.0)) {
    throw std::invalid_argument("make_learner: lambda must be positive");
  }
  if (config.selection == Selection::Aggregated && !(config.sigma > 0.0)) {
    throw std::invalid_argument("make_learner: sigma must be positive");
  }
  SymplerLearner learner;
  learner.config = config;
  learner.input_dim = n;
  learner.buffer.capacity = buffer_size(static_cast<std::size_t>(n));
  return learner;
}

LocalModel fit_local_model(const std::vector<Sample>& samples, double lambda) {
  if (samples.empty()) {
    throw std::invalid_argument("fit_local_model: empty sample set");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("fit_local_model: lambda must be positive");
  }
  const Index n = samples.front().x.size();
  const Index m = static_cast<Index>(samples.size());

  Matrix X(m, n + 1);
  Vector Y(m);
  Vector mean = Vector::Zero(n);
  for (Index i = 0; i < m; ++i) {
    const Sample& s = samples[static_cast<std::size_t>(i)];
    require_dim(s.x, n, "fit_local_model");
    require_finite(s.x, s.y, "fit_local_model");
    X.row(i).head(n) = s.x.transpose();
    X(i, n) = 1.0;
    Y(i) = s.y;
    mean += s.x;
  }
  mean /= static_cast<double>(m);

  // Solve (X^T X + lambda I) w = X^T Y through a QR factorization of the
  // lambda-augmented design matrix: the same system, at the square root of
  // its condition number.
  Matrix augmented = Matrix::Zero(m + n + 1, n + 1);
  augmented.topRows(m) = X;
  augmented.bottomRows(n + 1) =
      std::sqrt(lambda) * Matrix::Identity(n + 1, n + 1);
  Vector rhs = Vector::Zero(m + n + 1);
  rhs.head(m) = Y;

  LocalModel model;
  model.weights = augmented.colPivHouseholderQr().solve(rhs);
  model.point = mean;
  model.lambda_used = lambda;
  return model;
}

std::size_t nearest_index(const std::vector<LocalModel>& models, const Vector& x) {
  if (models.empty()) throw std::invalid_argument("nearest_index: no models");
  std::size_t best = 0;
  double best_d = (x - models[0].point).squaredNorm();
  for (std::size_t i = 1; i < models.size(); ++i) {
    const double d = (x - models[i].point).squaredNorm();
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

namespace {

double aggregated_output(const SymplerLearner& learner, const Vector& x) {
  // alpha_i = exp(-sigma*d_i) / sum_j exp(-sigma*d_j); shifting every
  // exponent by the minimum distance leaves the weights unchanged and
  // keeps them representable for distant queries.
  const auto& models = learner.models;
  double min_d = (x - models[0].point).norm();
  for (std::size_t i = 1; i < models.size(); ++i) {
    min_d = std::min(min_d, (x - models[i].point).norm());
  }
  double total = 0.0;
  double acc = 0.0;
  for (const LocalModel& m : models) {
    const double w = std::exp(-learner.config.sigma * ((x - m.point).norm() - min_d));
    total += w;
    acc += w * predict(m, x);
  }
  return acc / total;
}

std::size_t error_based_index(const SymplerLearner& learner) {
  const Sample& last = *learner.last_sample;
  std::size_t best = 0;
  double best_err = std::abs(last.y - predict(learner.models[0], last.x));
  for (std::size_t i = 1; i < learner.models.size(); ++i) {
    const double err = std::abs(last.y - predict(learner.models[i], last.x));
    if (err < best_err) {
      best = i;
      best_err = err;
    }
  }
  return best;
}

}  // namespace

std::optional<double> predict(const SymplerLearner& learner, const Vector& x) {
  require_dim(x, learner.input_dim, "predict");
  if (learner.models.empty()) return std::nullopt;
  switch (learner.config.selection) {
    case Selection::Nearest:
      return predict(learner.models[nearest_index(learner.models, x)], x);
    case Selection::Aggregated:
      return aggregated_output(learner, x);
    case Selection::ErrorBased:
      if (!learner.last_sample.has_value()) {
        return predict(learner.models[nearest_index(learner.models, x)], x);
      }
      return predict(learner.models[error_based_index(learner)], x);
  }
  throw std::logic_error("predict: unknown selection");
}

StepOutcome step(SymplerLearner& learner, const Vector& x, double y) {
  require_dim(x, learner.input_dim, "step");
  require_finite(x, y, "step");

  const std::size_t index = learner.next_index++;
  StepOutcome out;
  out.prediction = predict(learner, x);
  out.baseline = learner.prev_y;

  // The very first sample has no baseline: neither error is defined, so the
  // evolution machinery stays untouched and the sample only primes state.
  if (learner.prev_y.has_value()) {
    const double e_base = sq(y - *learner.prev_y);
    // With an empty committee the network counts as strictly worse; the
    // stored surrogate e_base + 1 keeps the cumulative averages finite.
    const bool net_worse =
        !out.prediction.has_value() || sq(y - *out.prediction) > e_base;
    const double e_net_stored =
        out.prediction.has_value() ? sq(y - *out.prediction) : e_base + 1.0;

    NoveltyBuffer& buf = learner.buffer;
    if (!buf.active()) {
      if (net_worse) {
        buf.samples.push_back({x, y, index});
        buf.sum_net_err = e_net_stored;
        buf.sum_base_err = e_base;
      }
    } else if (learner.config.discard_check == DiscardCheck::AddThenCompare) {
      // The current errors join the sums first; equal counts on both sides
      // make the sum comparison identical to the average comparison.
      buf.sum_net_err += e_net_stored;
      buf.sum_base_err += e_base;
      if (buf.sum_net_err <= buf.sum_base_err) {
        buf.reset();  // the network caught up; the discard sample is not
                      // re-tested as a fresh buffer start
      } else {
        buf.samples.push_back({x, y, index});
      }
    } else {  // CompareThenAdd
      if (buf.sum_net_err <= buf.sum_base_err) {
        buf.reset();
      } else {
        buf.sum_net_err += e_net_stored;
        buf.sum_base_err += e_base;
        buf.samples.push_back({x, y, index});
      }
    }

    if (buf.samples.size() >= buf.capacity) {
      LocalModel model = fit_local_model(buf.samples, learner.config.lambda);
      model.created_at = index;
      learner.models.push_back(std::move(model));
      buf.reset();
      out.model_added = true;
    }
  }

  learner.prev_y = y;
  learner.last_sample = Sample{x, y, index};
  out.buffer_len = learner.buffer.samples.size();
  return out;
}

Explanation explain(const SymplerLearner& learner, const Vector& x) {
  require_dim(x, learner.input_dim, "explain");
  if (learner.models.empty()) {
    throw std::invalid_argument("explain: the committee is empty");
  }
  const std::size_t i = nearest_index(learner.models, x);
  const LocalModel& m = learner.models[i];
  return {i, m.point, m.weights, (x - m.point).norm()};
}

}  // namespace sympler
