#pragma once

#include "sympler/io.hpp"
#include "sympler/learner.hpp"
#include "sympler/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace sympler {

/// Lengths of the three consecutive phases of a continual-learning run:
/// warmup (first exposure), update (adaptation), evaluation (frozen test).
struct SplitSpec {
  std::size_t warmup = 0;
  std::size_t update = 0;
  std::size_t eval = 0;
};

/// The three continual-learning metrics plus the intermediate warmup
/// losses they derive from.
struct EvaluationReport {
  double fitting_rmse = 0.0;
  double prediction_rmse = 0.0;
  double forgetting_ratio = 0.0;
  double loss_ww = 0.0;  ///< warmup loss measured after the warmup phase
  double loss_wu = 0.0;  ///< warmup loss measured after the update phase
  std::size_t model_count = 0;
  std::size_t sentinel_substitutions = 0;
};

double rmse(std::span<const double> predictions, std::span<const double> targets);

/// forgetting = max(0, loss_wu - loss_ww) / loss_ww, defined as 0 when
/// loss_ww is 0.
double forgetting_ratio(double loss_ww, double loss_wu);

/// Predictions of a frozen snapshot over a sample window (no learning).
/// While the snapshot has no models the naive value of the replay window
/// substitutes for the missing prediction; the very first replayed sample
/// has no naive value either and substitutes its own target. Substitutions
/// are counted.
struct ReplayResult {
  std::vector<double> predictions;
  std::size_t substitutions = 0;
};

ReplayResult frozen_replay(const SymplerLearner& snapshot,
                           std::span<const Sample> window);

/// Full protocol result: the report plus the snapshots and frozen
/// prediction traces behind it.
struct ProtocolRun {
  EvaluationReport report;
  SymplerLearner warmup_snapshot;  ///< state after the warmup phase
  SymplerLearner learner;          ///< state after the update phase
  std::vector<double> pred_ww;     ///< frozen warmup replay, warmup snapshot
  std::vector<double> pred_wu;     ///< frozen warmup replay, final snapshot
  std::vector<double> pred_fit;    ///< frozen warmup+update replay
  std::vector<double> pred_eval;   ///< frozen eval replay
};

/// Streams warmup and update through the learner (in that order), then
/// measures: loss_ww from a frozen replay of the warmup window right after
/// warmup; loss_wu and fitting error from frozen replays after the update;
/// prediction error from a frozen replay of the evaluation window.
ProtocolRun run_clear_protocol_detailed(const std::vector<Sample>& stream,
                                        const SplitSpec& split,
                                        const LearnerConfig& learner_cfg);

EvaluationReport run_clear_protocol(const std::vector<Sample>& stream,
                                    const SplitSpec& split,
                                    const LearnerConfig& learner_cfg);

/// z-scores every feature column and the target with externally supplied
/// stats; zero-variance columns pass through (divisor clamped to 1).
std::vector<Sample> standardize(const std::vector<Sample>& stream,
                                const StandardizationStats& stats);
std::vector<Sample> destandardize(const std::vector<Sample>& stream,
                                  const StandardizationStats& stats);

/// Rewrites a local model fitted on standardized data into original units
/// (weights, bias and approximation point).
LocalModel destandardize_model(const LocalModel& model,
                               const StandardizationStats& stats);

/// Single-vector and single-target conversions for inference-time use.
Vector standardize_input(const Vector& x, const StandardizationStats& stats);
double destandardize_target(double y, const StandardizationStats& stats);

}  // namespace sympler
