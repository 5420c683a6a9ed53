#include "sympler/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace sympler {

namespace {

Vector clamped_stds(const StandardizationStats& stats) {
  Vector s = stats.stds;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) == 0.0) s(i) = 1.0;
  }
  return s;
}

void require_stats_match(const StandardizationStats& stats, Index n,
                         const char* where) {
  if (stats.means.size() != n + 1 || stats.stds.size() != n + 1) {
    throw std::invalid_argument(std::string(where) +
                                ": stats cover a different column count");
  }
}

double rmse_of_window(const std::vector<double>& predictions,
                      std::span<const Sample> window) {
  double sum = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const double r = window[i].y - predictions[i];
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(window.size()));
}

}  // namespace

double rmse(std::span<const double> predictions,
            std::span<const double> targets) {
  if (predictions.size() != targets.size()) {
    throw std::invalid_argument("rmse: length mismatch");
  }
  if (predictions.empty()) throw std::invalid_argument("rmse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double r = predictions[i] - targets[i];
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(predictions.size()));
}

double forgetting_ratio(double loss_ww, double loss_wu) {
  if (loss_ww == 0.0) return 0.0;
  return std::max(0.0, loss_wu - loss_ww) / loss_ww;
}

ReplayResult frozen_replay(const SymplerLearner& snapshot,
                           std::span<const Sample> window) {
  ReplayResult result;
  result.predictions.reserve(window.size());
  std::optional<double> naive;
  for (const Sample& s : window) {
    const std::optional<double> p = predict(snapshot, s.x);
    if (p.has_value()) {
      result.predictions.push_back(*p);
    } else {
      result.predictions.push_back(naive.value_or(s.y));
      result.substitutions += 1;
    }
    naive = s.y;
  }
  return result;
}

ProtocolRun run_clear_protocol_detailed(const std::vector<Sample>& stream,
                                        const SplitSpec& split,
                                        const LearnerConfig& learner_cfg) {
  if (split.warmup == 0 || split.update == 0 || split.eval == 0) {
    throw std::invalid_argument("run_clear_protocol: every phase needs samples");
  }
  if (split.warmup + split.update + split.eval != stream.size()) {
    throw std::invalid_argument("run_clear_protocol: split does not cover the stream");
  }
  const std::span<const Sample> all(stream);
  const auto warmup = all.subspan(0, split.warmup);
  const auto update = all.subspan(split.warmup, split.update);
  const auto fit_window = all.subspan(0, split.warmup + split.update);
  const auto eval = all.subspan(split.warmup + split.update, split.eval);

  ProtocolRun run;
  SymplerLearner learner =
      make_learner(stream.front().x.size(), learner_cfg);
  for (const Sample& s : warmup) step(learner, s.x, s.y);
  run.warmup_snapshot = learner;

  ReplayResult ww = frozen_replay(run.warmup_snapshot, warmup);
  for (const Sample& s : update) step(learner, s.x, s.y);

  ReplayResult wu = frozen_replay(learner, warmup);
  ReplayResult fit = frozen_replay(learner, fit_window);
  ReplayResult pred = frozen_replay(learner, eval);

  run.report.loss_ww = rmse_of_window(ww.predictions, warmup);
  run.report.loss_wu = rmse_of_window(wu.predictions, warmup);
  run.report.fitting_rmse = rmse_of_window(fit.predictions, fit_window);
  run.report.prediction_rmse = rmse_of_window(pred.predictions, eval);
  run.report.forgetting_ratio =
      forgetting_ratio(run.report.loss_ww, run.report.loss_wu);
  run.report.model_count = learner.models.size();
  run.report.sentinel_substitutions =
      ww.substitutions + wu.substitutions + fit.substitutions + pred.substitutions;

  run.pred_ww = std::move(ww.predictions);
  run.pred_wu = std::move(wu.predictions);
  run.pred_fit = std::move(fit.predictions);
  run.pred_eval = std::move(pred.predictions);
  run.learner = std::move(learner);
  return run;
}

EvaluationReport run_clear_protocol(const std::vector<Sample>& stream,
                                    const SplitSpec& split,
                                    const LearnerConfig& learner_cfg) {
  return run_clear_protocol_detailed(stream, split, learner_cfg).report;
}

std::vector<Sample> standardize(const std::vector<Sample>& stream,
                                const StandardizationStats& stats) {
  if (stream.empty()) return {};
  const Index n = stream.front().x.size();
  require_stats_match(stats, n, "standardize");
  const Vector s = clamped_stds(stats);

  std::vector<Sample> out;
  out.reserve(stream.size());
  for (const Sample& sample : stream) {
    Sample z = sample;
    z.x = (sample.x - stats.means.head(n)).cwiseQuotient(s.head(n));
    z.y = (sample.y - stats.means(n)) / s(n);
    out.push_back(std::move(z));
  }
  return out;
}

std::vector<Sample> destandardize(const std::vector<Sample>& stream,
                                  const StandardizationStats& stats) {
  if (stream.empty()) return {};
  const Index n = stream.front().x.size();
  require_stats_match(stats, n, "destandardize");
  const Vector s = clamped_stds(stats);

  std::vector<Sample> out;
  out.reserve(stream.size());
  for (const Sample& sample : stream) {
    Sample raw = sample;
    raw.x = sample.x.cwiseProduct(s.head(n)) + stats.means.head(n);
    raw.y = sample.y * s(n) + stats.means(n);
    out.push_back(std::move(raw));
  }
  return out;
}

Vector standardize_input(const Vector& x, const StandardizationStats& stats) {
  const Index n = x.size();
  require_stats_match(stats, n, "standardize_input");
  const Vector s = clamped_stds(stats);
  return (x - stats.means.head(n)).cwiseQuotient(s.head(n));
}

double destandardize_target(double y, const StandardizationStats& stats) {
  const Index n = stats.means.size() - 1;
  const double s = stats.stds(n) == 0.0 ? 1.0 : stats.stds(n);
  return y * s + stats.means(n);
}

LocalModel destandardize_model(const LocalModel& model,
                               const StandardizationStats& stats) {
  const Index n = model.point.size();
  require_stats_match(stats, n, "destandardize_model");
  const Vector s = clamped_stds(stats);

  // standardized: y' = w.x' + b with x' = (x - mu_x)/s_x, y' = (y - mu_y)/s_y
  // original:     y  = mu_y + s_y*b - s_y*sum_j w_j mu_j/s_j + sum_j (s_y w_j/s_j) x_j
  LocalModel out = model;
  double bias = model.weights(n);
  for (Index j = 0; j < n; ++j) {
    out.weights(j) = s(n) * model.weights(j) / s(j);
    bias -= model.weights(j) * stats.means(j) / s(j);
  }
  out.weights(n) = stats.means(n) + s(n) * bias;
  out.point = model.point.cwiseProduct(s.head(n)) + stats.means.head(n);
  return out;
}

}  // namespace sympler
