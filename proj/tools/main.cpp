#include "sympler/baselines.hpp"
#include "sympler/eval.hpp"
#include "sympler/experiments.hpp"
#include "sympler/io.hpp"
#include "sympler/learner.hpp"
#include "sympler/pendulum.hpp"
#include "sympler/vc_bounds.hpp"
#include "sympler/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sympler;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

/// Every directory-producing run records the exact flag values it used, so
/// a run can be reproduced byte-for-byte from its output directory alone.
void write_manifest(const fs::path& dir, const std::string& subcommand,
                    const json& flags) {
  json manifest;
  manifest["subcommand"] = subcommand;
  manifest["flags"] = flags;
  manifest["version"] = kVersion;
  write_json(dir / "manifest.json", manifest);
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

json flags_for_learner(const LearnerConfig& cfg) {
  return {{"lambda", cfg.lambda},
          {"selection", to_string(cfg.selection)},
          {"sigma", cfg.sigma}};
}

json flags_for_pendulum(const PendulumConfig& cfg) {
  return {{"rod", cfg.rod},       {"g", cfg.g},
          {"dt", cfg.dt},         {"theta0", cfg.theta0},
          {"omega0", cfg.omega0}, {"cycles", cfg.cycles}};
}

json merge(json a, const json& b) {
  a.update(b);
  return a;
}

double rmse_against(const std::vector<double>& a, const std::vector<double>& b,
                    std::size_t from) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = from; k < a.size() && k < b.size(); ++k) {
    const double r = a[k] - b[k];
    sum += r * r;
    ++count;
  }
  return std::sqrt(sum / static_cast<double>(count));
}

// ---------------------------------------------------------------------------
// vc-table

struct VcTableArgs {
  std::size_t h_max = 100;
  double eta = 0.01;
  std::string out;
};

void run_vc_table(const VcTableArgs& args) {
  const auto rows = bound_table(args.h_max, args.eta);
  std::string csv = "h,l_star,l_rule\n";
  for (const BoundSolution& row : rows) {
    csv += std::to_string(row.h) + ',' + format_double(row.l_star) + ',' +
           std::to_string(row.l_rule) + '\n';
  }
  write_text(args.out, csv);
}

// ---------------------------------------------------------------------------
// pendulum experiments

struct PendulumArgs {
  PendulumConfig pendulum;
  LearnerConfig learner;
  std::string selection_name = "nearest";
  std::uint64_t seed = 0;
  std::string out;
};

void add_pendulum_flags(CLI::App* cmd, PendulumArgs& args,
                        const char* default_selection) {
  args.selection_name = default_selection;
  cmd->add_option("--rod", args.pendulum.rod, "Rod length, m")
      ->capture_default_str();
  cmd->add_option("--g", args.pendulum.g, "Gravity, m/s^2")
      ->capture_default_str();
  cmd->add_option("--dt", args.pendulum.dt, "Sampling period, s")
      ->capture_default_str();
  cmd->add_option("--theta0", args.pendulum.theta0, "Initial angle, rad")
      ->capture_default_str();
  cmd->add_option("--omega0", args.pendulum.omega0,
                  "Initial angular velocity, rad/s")
      ->capture_default_str();
  cmd->add_option("--cycles", args.pendulum.cycles,
                  "Training duration in oscillation periods")
      ->capture_default_str();
  cmd->add_option("--lambda", args.learner.lambda, "Ridge regularization")
      ->capture_default_str();
  cmd->add_option("--selection", args.selection_name,
                  "Model selection: nearest|aggregated|error_based")
      ->capture_default_str();
  cmd->add_option("--sigma", args.learner.sigma,
                  "Distance decay rate (aggregated selection)")
      ->capture_default_str();
  cmd->add_option("--seed", args.seed, "Random seed")->capture_default_str();
  cmd->add_option("--out", args.out, "Output directory")->required();
}

json base_flags(const PendulumArgs& args) {
  return merge(merge(flags_for_pendulum(args.pendulum),
                     flags_for_learner(args.learner)),
               {{"seed", args.seed}});
}

void write_step_trace(const fs::path& path,
                      const std::vector<StepTrace>& trace) {
  std::vector<std::vector<double>> rows;
  rows.reserve(trace.size());
  for (const StepTrace& row : trace) {
    rows.push_back({row.t, row.input,
                    row.sq_err.value_or(std::numeric_limits<double>::quiet_NaN()),
                    static_cast<double>(row.model_count)});
  }
  write_trace(path, {"t", "theta", "err_sq", "model_count"}, rows);
}

void run_pendulum_train(PendulumArgs& args) {
  args.learner.selection = selection_from_string(args.selection_name);
  const fs::path dir = prepare_out_dir(args.out);
  const BaseReport report = run_base_experiment(args.pendulum, args.learner);

  write_step_trace(dir / "trace.csv", report.trace);
  save_snapshot(report.learner, dir / "snapshot.json");

  json taylor = json::array();
  double max_slope_diff = 0.0;
  double max_bias_diff = 0.0;
  for (const TaylorCheck& c : report.taylor) {
    taylor.push_back({{"point", c.point},
                      {"slope", c.slope},
                      {"bias", c.bias},
                      {"taylor_slope", c.taylor_slope},
                      {"taylor_bias", c.taylor_bias}});
    max_slope_diff = std::max(max_slope_diff, std::abs(c.slope - c.taylor_slope));
    max_bias_diff = std::max(max_bias_diff, std::abs(c.bias - c.taylor_bias));
  }
  json rep;
  rep["model_count"] = report.model_count;
  rep["period"] = report.period;
  rep["creation_indices"] = report.creation_indices;
  rep["creations_per_half_cycle"] =
      creations_per_half_cycle(report.trace, report.creation_indices, report.period);
  rep["taylor"] = std::move(taylor);
  rep["max_taylor_slope_diff"] = max_slope_diff;
  rep["max_taylor_bias_diff"] = max_bias_diff;
  write_json(dir / "report.json", rep);
  write_manifest(dir, "pendulum-train", base_flags(args));
}

struct ForecastArgs {
  PendulumArgs base;
  double duration = 167.0;
};

void run_pendulum_forecast(ForecastArgs& args) {
  args.base.learner.selection = selection_from_string(args.base.selection_name);
  const fs::path dir = prepare_out_dir(args.base.out);
  const PendulumConfig& cfg = args.base.pendulum;

  const BaseReport trained = run_base_experiment(cfg, args.base.learner);
  const auto steps =
      static_cast<std::size_t>(std::ceil(args.duration / cfg.dt));
  const auto truth_records = simulate_steps(cfg, steps);

  const ForecastResult model_fc =
      forecast_long_term(accel_from_learner(trained.learner), cfg, args.duration);
  const ForecastResult linear_fc =
      forecast_long_term(accel_linearized(cfg), cfg, args.duration);

  std::vector<double> truth(truth_records.size());
  for (std::size_t k = 0; k < truth_records.size(); ++k) {
    truth[k] = truth_records[k].theta;
  }

  std::vector<std::vector<double>> rows;
  rows.reserve(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) {
    rows.push_back({static_cast<double>(k) * cfg.dt, truth[k],
                    model_fc.theta[k], linear_fc.theta[k]});
  }
  write_trace(dir / "forecast.csv",
              {"t", "theta_true", "theta_model", "theta_linear"}, rows);
  save_snapshot(trained.learner, dir / "snapshot.json");

  const double period_true = trained.period;
  const auto two_cycles = static_cast<std::size_t>(2.0 * period_true / cfg.dt);
  const std::size_t final_two_start =
      truth.size() > two_cycles ? truth.size() - two_cycles : 0;
  json rep;
  rep["duration"] = args.duration;
  rep["period_true"] = period_true;
  rep["period_model_first_cycle"] = measure_period_of_series(model_fc.theta, cfg.dt);
  rep["period_linear_first_cycle"] = measure_period_of_series(linear_fc.theta, cfg.dt);
  rep["rmse_final_two_cycles_model"] = rmse_against(model_fc.theta, truth, final_two_start);
  rep["rmse_final_two_cycles_linear"] = rmse_against(linear_fc.theta, truth, final_two_start);
  rep["model_count"] = trained.model_count;
  write_json(dir / "report.json", rep);
  write_manifest(dir, "pendulum-forecast",
                 merge(base_flags(args.base), {{"duration", args.duration}}));
}

struct DriftArgs {
  PendulumArgs base;
  double rod_after = 1.0;
};

void run_pendulum_drift(DriftArgs& args) {
  args.base.learner.selection = selection_from_string(args.base.selection_name);
  const fs::path dir = prepare_out_dir(args.base.out);
  const DriftReport report =
      run_concept_drift(args.base.pendulum, args.base.learner, args.rod_after);

  write_step_trace(dir / "trace.csv", report.trace);
  save_snapshot(report.learner, dir / "snapshot.json");

  json rep;
  rep["period_before"] = report.period_before;
  rep["period_after"] = report.period_after;
  rep["t_switch"] = report.t_switch;
  rep["switch_index"] = report.switch_index;
  rep["creation_indices"] = report.creation_indices;
  rep["creation_points"] = report.creation_points;
  rep["models_before_switch"] = report.models_before_switch;
  rep["models_after_switch"] = report.models_after_switch;
  rep["pre_point_min"] = report.pre_point_min;
  rep["pre_point_max"] = report.pre_point_max;
  rep["new_point_in_pre_range"] = report.new_point_in_pre_range;
  rep["pre_settled_mse"] = report.pre_settled_mse;
  rep["post_switch_max_sq"] = report.post_switch_max_sq;
  rep["final_half_mse"] = report.final_half_mse;
  write_json(dir / "report.json", rep);
  write_manifest(dir, "pendulum-drift",
                 merge(base_flags(args.base), {{"rod_after", args.rod_after}}));
}

struct HighDimArgs {
  PendulumArgs base;
  std::vector<std::size_t> dims = {0, 5, 10, 20, 50, 100};
  std::size_t reps = 10;
  std::size_t jobs = 1;
};

void run_pendulum_highdim(HighDimArgs& args) {
  args.base.learner.selection = selection_from_string(args.base.selection_name);
  const fs::path dir = prepare_out_dir(args.base.out);
  const HighDimReport report =
      run_high_dim(args.base.pendulum, args.base.learner, args.dims, args.reps,
                   args.base.seed, args.jobs);

  std::vector<std::vector<double>> rows;
  json cells = json::array();
  for (const HighDimCell& cell : report.cells) {
    rows.push_back({static_cast<double>(cell.extra_dims), cell.mean_test_mse,
                    cell.mean_model_count});
    cells.push_back({{"extra_dims", cell.extra_dims},
                     {"mean_test_mse", cell.mean_test_mse},
                     {"mean_model_count", cell.mean_model_count},
                     {"test_mse", cell.test_mse},
                     {"model_count", cell.model_count}});
  }
  write_trace(dir / "cells.csv",
              {"extra_dims", "mean_test_mse", "mean_model_count"}, rows);
  write_json(dir / "report.json",
             json{{"cells", std::move(cells)}, {"reps", args.reps}});
  write_manifest(dir, "pendulum-highdim",
                 merge(base_flags(args.base),
                       {{"dims", args.dims}, {"reps", args.reps}, {"jobs", args.jobs}}));
}

struct NoiseArgs {
  PendulumArgs base;
  std::vector<double> noise_sigmas = {0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> lambdas = {1e-6, 1.0, 15.0};
  std::size_t reps = 30;
  std::size_t jobs = 1;
};

void run_pendulum_noise(NoiseArgs& args) {
  args.base.learner.selection = selection_from_string(args.base.selection_name);
  const fs::path dir = prepare_out_dir(args.base.out);
  const NoiseReport report =
      run_noise_study(args.base.pendulum, args.noise_sigmas, args.lambdas,
                      args.reps, args.base.seed, args.jobs);

  std::vector<std::vector<double>> rows;
  json cells = json::array();
  for (const NoiseCell& cell : report.cells) {
    rows.push_back({cell.noise_sigma, cell.lambda, cell.mean_distance});
    cells.push_back({{"noise_sigma", cell.noise_sigma},
                     {"lambda", cell.lambda},
                     {"mean_distance", cell.mean_distance},
                     {"distance", cell.distance}});
  }
  write_trace(dir / "cells.csv", {"noise_sigma", "lambda", "mean_distance"}, rows);
  write_json(dir / "report.json",
             json{{"cells", std::move(cells)}, {"reps", args.reps}});
  write_manifest(dir, "pendulum-noise",
                 merge(base_flags(args.base),
                       {{"noise_sigmas", args.noise_sigmas},
                        {"lambdas", args.lambdas},
                        {"reps", args.reps},
                        {"jobs", args.jobs}}));
}

// ---------------------------------------------------------------------------
// evaluate / explain / predict

struct SchemaArgs {
  std::vector<std::string> features;
  std::string target;
};

/// Default schema when no column flags are given: every column but the
/// last is a feature, the last is the target.
DatasetSchema resolve_schema(const fs::path& data, const SchemaArgs& args) {
  DatasetSchema schema;
  const auto header = read_csv_header(data);
  schema.target_column = args.target.empty() ? header.back() : args.target;
  if (!args.features.empty()) {
    schema.feature_columns = args.features;
  } else {
    if (header.size() < 2) {
      throw std::runtime_error(data.string() + ": need at least two columns");
    }
    schema.feature_columns.assign(header.begin(), header.end() - 1);
    std::erase(schema.feature_columns, schema.target_column);
  }
  return schema;
}

struct EvaluateArgs {
  std::string data;
  std::size_t warmup = 0;
  std::size_t update = 0;
  std::string stats;
  double lambda = 1e-6;
  std::string selection_name = "nearest";
  double sigma = 1.0;
  SchemaArgs schema;
  std::uint64_t seed = 0;
  std::string out;
};

void run_evaluate(const EvaluateArgs& args) {
  const fs::path dir = prepare_out_dir(args.out);
  const DatasetSchema schema = resolve_schema(args.data, args.schema);
  std::vector<Sample> stream = load_csv(args.data, schema);
  if (!args.stats.empty()) {
    stream = standardize(stream, load_stats_csv(args.stats));
  }
  if (stream.size() <= args.warmup + args.update) {
    throw std::runtime_error("evaluate: warmup+update leaves no evaluation data");
  }
  const SplitSpec split{args.warmup, args.update,
                        stream.size() - args.warmup - args.update};

  LearnerConfig cfg;
  cfg.lambda = args.lambda;
  cfg.selection = selection_from_string(args.selection_name);
  cfg.sigma = args.sigma;
  const ProtocolRun run = run_clear_protocol_detailed(stream, split, cfg);

  json rep;
  rep["fitting_rmse"] = run.report.fitting_rmse;
  rep["prediction_rmse"] = run.report.prediction_rmse;
  rep["forgetting_ratio"] = run.report.forgetting_ratio;
  rep["loss_ww"] = run.report.loss_ww;
  rep["loss_wu"] = run.report.loss_wu;
  rep["model_count"] = run.report.model_count;
  rep["sentinel_substitutions"] = run.report.sentinel_substitutions;
  write_json(dir / "report.json", rep);

  save_snapshot(run.learner, dir / "snapshot.json");
  save_snapshot(run.warmup_snapshot, dir / "warmup_snapshot.json");

  // frozen prediction traces behind each reported number
  std::vector<std::vector<double>> rows;
  const auto emit = [&](double phase, std::size_t offset,
                        const std::vector<double>& preds) {
    for (std::size_t i = 0; i < preds.size(); ++i) {
      rows.push_back({phase, static_cast<double>(i + offset),
                      stream[i + offset].y, preds[i]});
    }
  };
  emit(0, 0, run.pred_ww);
  emit(1, 0, run.pred_wu);
  emit(2, 0, run.pred_fit);
  emit(3, args.warmup + args.update, run.pred_eval);
  write_trace(dir / "predictions.csv",
              {"phase", "index", "target", "prediction"}, rows);

  json flags;
  flags["data"] = args.data;
  flags["warmup"] = args.warmup;
  flags["update"] = args.update;
  flags["stats"] = args.stats;
  flags["lambda"] = args.lambda;
  flags["selection"] = args.selection_name;
  flags["sigma"] = args.sigma;
  flags["features"] = schema.feature_columns;
  flags["target"] = schema.target_column;
  flags["seed"] = args.seed;
  write_manifest(dir, "evaluate", flags);
}

struct ExplainArgs {
  std::string snapshot;
  std::vector<double> x;
  std::string stats;
  std::string out;
};

void run_explain(const ExplainArgs& args) {
  const SymplerLearner learner = load_snapshot(args.snapshot);
  Vector x(static_cast<Index>(args.x.size()));
  for (std::size_t i = 0; i < args.x.size(); ++i) {
    x(static_cast<Index>(i)) = args.x[i];
  }

  std::optional<StandardizationStats> stats;
  if (!args.stats.empty()) stats = load_stats_csv(args.stats);

  // with stats the query is given in original units, the committee lives in
  // standardized space, and the report converts back to original units
  const Vector query = stats ? standardize_input(x, *stats) : x;
  const Explanation info = explain(learner, query);

  LocalModel shown;
  shown.point = info.point;
  shown.weights = info.weights;
  if (stats) shown = destandardize_model(shown, *stats);

  json rep;
  rep["model_index"] = info.model_index;
  rep["distance"] = info.distance;
  rep["point"] = std::vector<double>(shown.point.data(),
                                     shown.point.data() + shown.point.size());
  rep["weights"] = std::vector<double>(
      shown.weights.data(), shown.weights.data() + shown.weights.size());
  rep["units"] = stats ? "original" : "model";

  std::cout << rep.dump(2) << "\n";
  if (!args.out.empty()) write_json(args.out, rep);
}

struct PredictArgs {
  std::string snapshot;
  std::string data;
  std::string stats;
  SchemaArgs schema;
  std::string out;
};

void run_predict(const PredictArgs& args) {
  const SymplerLearner learner = load_snapshot(args.snapshot);
  std::optional<StandardizationStats> stats;
  if (!args.stats.empty()) stats = load_stats_csv(args.stats);

  // column resolution: explicit flags win; otherwise a file with exactly n
  // columns is all features, and one with n+1 treats the last as target
  const auto header = read_csv_header(args.data);
  std::vector<std::string> features = args.schema.features;
  std::string target = args.schema.target;
  if (features.empty()) {
    const auto n = static_cast<std::size_t>(learner.input_dim);
    if (header.size() == n) {
      features = header;
    } else if (header.size() == n + 1) {
      features.assign(header.begin(), header.end() - 1);
      if (target.empty()) target = header.back();
    } else {
      throw std::runtime_error(
          "predict: cannot infer feature columns; pass --features");
    }
  }

  const std::vector<Vector> inputs = load_feature_rows(args.data, features);
  std::vector<double> targets;
  if (!target.empty()) {
    DatasetSchema schema;
    schema.feature_columns = features;
    schema.target_column = target;
    for (const Sample& s : load_csv(args.data, schema)) targets.push_back(s.y);
  }

  std::string csv =
      target.empty() ? "index,prediction\n" : "index,prediction,target\n";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Vector q = stats ? standardize_input(inputs[i], *stats) : inputs[i];
    const std::optional<double> p = predict(learner, q);
    double value = std::numeric_limits<double>::quiet_NaN();
    if (p.has_value()) value = stats ? destandardize_target(*p, *stats) : *p;
    csv += std::to_string(i) + ',' + format_double(value);
    if (!target.empty()) csv += ',' + format_double(targets[i]);
    csv += '\n';
  }
  write_text(args.out, csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SyMPLER: piecewise-linear continual learning for time series"};
  app.require_subcommand(1);
  std::function<void()> action;

  VcTableArgs vc;
  auto* vc_cmd = app.add_subcommand(
      "vc-table", "Minimum training sizes per VC dimension, as CSV");
  vc_cmd->add_option("--h-max", vc.h_max, "Largest VC dimension")
      ->capture_default_str();
  vc_cmd->add_option("--eta", vc.eta, "Confidence parameter")
      ->capture_default_str();
  vc_cmd->add_option("--out", vc.out, "Output CSV path")->required();
  vc_cmd->callback([&] { action = [&] { run_vc_table(vc); }; });

  PendulumArgs train;
  auto* train_cmd = app.add_subcommand(
      "pendulum-train", "Online training on the simulated pendulum");
  add_pendulum_flags(train_cmd, train, "nearest");
  train_cmd->callback([&] { action = [&] { run_pendulum_train(train); }; });

  ForecastArgs forecast;
  auto* forecast_cmd = app.add_subcommand(
      "pendulum-forecast", "Train, freeze and forecast in closed loop");
  add_pendulum_flags(forecast_cmd, forecast.base, "nearest");
  forecast_cmd->add_option("--duration", forecast.duration, "Forecast horizon, s")
      ->capture_default_str();
  forecast_cmd->callback(
      [&] { action = [&] { run_pendulum_forecast(forecast); }; });

  DriftArgs drift;
  auto* drift_cmd = app.add_subcommand(
      "pendulum-drift", "Training across a mid-stream rod-length change");
  add_pendulum_flags(drift_cmd, drift.base, "error_based");
  drift_cmd->add_option("--rod-after", drift.rod_after,
                        "Rod length after the switch, m")
      ->capture_default_str();
  drift_cmd->callback([&] { action = [&] { run_pendulum_drift(drift); }; });

  HighDimArgs highdim;
  auto* highdim_cmd =
      app.add_subcommand("pendulum-highdim", "Spurious-dimension study");
  add_pendulum_flags(highdim_cmd, highdim.base, "nearest");
  highdim_cmd->add_option("--dims", highdim.dims, "Spurious dimension counts")
      ->delimiter(',')
      ->capture_default_str();
  highdim_cmd->add_option("--reps", highdim.reps, "Repetitions per cell")
      ->capture_default_str();
  highdim_cmd->add_option("--jobs", highdim.jobs, "Parallel workers")
      ->capture_default_str();
  highdim_cmd->callback(
      [&] { action = [&] { run_pendulum_highdim(highdim); }; });

  NoiseArgs noise;
  auto* noise_cmd = app.add_subcommand(
      "pendulum-noise", "Target-noise versus regularization study");
  add_pendulum_flags(noise_cmd, noise.base, "nearest");
  noise_cmd->add_option("--noise-sigmas", noise.noise_sigmas, "Noise levels")
      ->delimiter(',')
      ->capture_default_str();
  noise_cmd->add_option("--lambdas", noise.lambdas, "Regularization strengths")
      ->delimiter(',')
      ->capture_default_str();
  noise_cmd->add_option("--reps", noise.reps, "Repetitions per cell")
      ->capture_default_str();
  noise_cmd->add_option("--jobs", noise.jobs, "Parallel workers")
      ->capture_default_str();
  noise_cmd->callback([&] { action = [&] { run_pendulum_noise(noise); }; });

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Warmup/update/evaluation protocol on a CSV stream");
  eval_cmd->add_option("--data", eval_args.data, "Input CSV")->required();
  eval_cmd->add_option("--warmup", eval_args.warmup, "Warmup sample count")
      ->required();
  eval_cmd->add_option("--update", eval_args.update, "Update sample count")
      ->required();
  eval_cmd->add_option("--stats", eval_args.stats,
                       "Standardization stats CSV (optional)");
  eval_cmd->add_option("--lambda", eval_args.lambda, "Ridge regularization")
      ->capture_default_str();
  eval_cmd->add_option("--selection", eval_args.selection_name,
                       "Model selection: nearest|aggregated|error_based")
      ->capture_default_str();
  eval_cmd->add_option("--sigma", eval_args.sigma,
                       "Distance decay rate (aggregated selection)")
      ->capture_default_str();
  eval_cmd->add_option("--features", eval_args.schema.features,
                       "Feature column names (default: all but last)")
      ->delimiter(',');
  eval_cmd->add_option("--target", eval_args.schema.target,
                       "Target column name (default: last)");
  eval_cmd->add_option("--seed", eval_args.seed, "Random seed")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_args.out, "Output directory")->required();
  eval_cmd->callback([&] { action = [&] { run_evaluate(eval_args); }; });

  ExplainArgs explain_args;
  auto* explain_cmd =
      app.add_subcommand("explain", "Nearest local model for a query point");
  explain_cmd->add_option("--snapshot", explain_args.snapshot,
                          "Model snapshot JSON")
      ->required();
  explain_cmd->add_option("--x", explain_args.x, "Query point components")
      ->delimiter(',')
      ->required();
  explain_cmd->add_option(
      "--stats", explain_args.stats,
      "Stats CSV: query given in original units, report mapped back to them");
  explain_cmd->add_option("--out", explain_args.out, "Also write the report here");
  explain_cmd->callback([&] { action = [&] { run_explain(explain_args); }; });

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand(
      "predict", "Batch inference from a snapshot over a CSV");
  predict_cmd->add_option("--snapshot", predict_args.snapshot,
                          "Model snapshot JSON")
      ->required();
  predict_cmd->add_option("--data", predict_args.data, "Input CSV")->required();
  predict_cmd->add_option("--stats", predict_args.stats,
                          "Standardization stats CSV (optional)");
  predict_cmd->add_option("--features", predict_args.schema.features,
                          "Feature column names")
      ->delimiter(',');
  predict_cmd->add_option("--target", predict_args.schema.target,
                          "Target column name (copied into the output)");
  predict_cmd->add_option("--out", predict_args.out, "Output CSV path")
      ->required();
  predict_cmd->callback([&] { action = [&] { run_predict(predict_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n"
              << "run '" << argv[0] << " --help' for usage\n";
    return 2;
  }

  try {
    action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
