#pragma once

#include "sympler/types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace sympler {

/// How the committee picks local models at prediction time.
///  - Nearest: winner-take-all on Euclidean distance to the approximation
///    points.
///  - Aggregated: convex combination with weights exp(-sigma * distance),
///    normalized.
///  - ErrorBased: the model with the smallest absolute error on the most
///    recent observed sample; meant for concept drift, where obsolete and
///    current models overlap in input space.
enum class Selection { Nearest, Aggregated, ErrorBased };

/// Ordering of the buffer-discard comparison relative to the current
/// sample's errors. AddThenCompare folds the current errors into the
/// cumulative sums before comparing; CompareThenAdd checks the existing
/// sums first.
enum class DiscardCheck { AddThenCompare, CompareThenAdd };

std::string to_string(Selection s);
Selection selection_from_string(const std::string& name);

struct LearnerConfig {
  double lambda = 1e-6;
  Selection selection = Selection::Nearest;
  double sigma = 1.0;
  DiscardCheck discard_check = DiscardCheck::AddThenCompare;
};

/// One hidden unit: an affine model in input space, valid near its
/// approximation point.
struct LocalModel {
  Vector weights;          ///< length n+1, bias last
  Vector point;            ///< approximation point, length n
  std::size_t created_at = 0;  ///< stream index at creation
  double lambda_used = 0.0;
};

/// Affine response of one local model.
double predict(const LocalModel& model, const Vector& x);

/// Candidate training set for the next local model, plus the cumulative
/// squared-error sums of the network and the naive baseline over exactly
/// the buffered interval.
struct NoveltyBuffer {
  std::vector<Sample> samples;
  double sum_net_err = 0.0;
  double sum_base_err = 0.0;
  std::size_t capacity = 0;

  bool active() const { return !samples.empty(); }
  void reset() {
    samples.clear();
    sum_net_err = 0.0;
    sum_base_err = 0.0;
  }
};

struct StepOutcome {
  std::optional<double> prediction;  ///< network output before y was seen
  std::optional<double> baseline;    ///< naive output before y was seen
  bool model_added = false;
  std::size_t buffer_len = 0;
};

struct Explanation {
  std::size_t model_index = 0;
  Vector point;
  Vector weights;
  double distance = 0.0;
};

/// The evolving committee. Local models are only ever appended, never
/// modified or removed, so knowledge acquired on past regions is stable by
/// construction.
struct SymplerLearner {
  std::vector<LocalModel> models;
  NoveltyBuffer buffer;
  LearnerConfig config;
  std::optional<double> prev_y;       ///< naive-baseline state
  std::optional<Sample> last_sample;  ///< for ErrorBased selection
  Index input_dim = 0;
  std::size_t next_index = 0;  ///< stream position of the next sample
};

/// Fresh learner for n-dimensional inputs; the buffer capacity follows the
/// practical rule 2(n+1) + 10.
SymplerLearner make_learner(Index n, const LearnerConfig& config = {});

/// Ridge fit of one local model on a buffered batch: the exact solution of
/// (X^T X + lambda I) w = X^T Y via a direct dense QR solve, with X
/// carrying a trailing ones column for the bias. The bias coordinate is
/// regularized like every other one. The approximation point is the mean
/// of the batch inputs.
LocalModel fit_local_model(const std::vector<Sample>& samples, double lambda);

/// Committee output at x under the configured selection, or nullopt while
/// the committee is empty.
std::optional<double> predict(const SymplerLearner& learner, const Vector& x);

/// Consumes one stream observation:
///  1. predicts with the committee and with the naive baseline,
///  2. compares their squared errors once y is revealed,
///  3. opens the novelty buffer on the first sample where the network does
///     worse than the baseline, grows it while the cumulative network error
///     stays above the baseline's, discards it when the network catches up,
///  4. fits and appends a new local model when the buffer reaches capacity.
/// The stream's very first sample only primes the baseline (neither error
/// is defined) and is never buffered.
StepOutcome step(SymplerLearner& learner, const Vector& x, double y);

/// Index of the model whose approximation point is closest to x
/// (ties: lowest index). Requires a nonempty committee.
std::size_t nearest_index(const std::vector<LocalModel>& models, const Vector& x);

/// The nearest local model's point, weights and distance for a query --
/// the information a human reads to interpret the committee around x.
Explanation explain(const SymplerLearner& learner, const Vector& x);

}  // namespace sympler
