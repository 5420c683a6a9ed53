#include "sympler/eval.hpp"

#include "sympler/baselines.hpp"
#include "sympler/rng.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace sympler;

namespace {

Vector vec1(double v) {
  Vector x(1);
  x << v;
  return x;
}

}  // namespace

TEST_CASE("rmse") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  CHECK(rmse(a, a) == 0.0);

  const std::vector<double> p{3.0, 4.0};
  const std::vector<double> t{0.0, 0.0};
  CHECK(rmse(p, t) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));

  const std::vector<double> c{2.5, 2.5, 2.5};
  const std::vector<double> z{0.0, 0.0, 0.0};
  CHECK(rmse(c, z) == doctest::Approx(2.5).epsilon(1e-12));

  CHECK_THROWS_AS(rmse(p, a), std::invalid_argument);
  CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("forgetting ratio formula") {
  CHECK(forgetting_ratio(10.0, 12.0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(forgetting_ratio(10.0, 8.0) == 0.0);
  CHECK(forgetting_ratio(0.0, 5.0) == 0.0);
  CHECK(forgetting_ratio(0.0, 0.0) == 0.0);
}

TEST_CASE("frozen replay substitutes the naive value for empty committees") {
  const SymplerLearner empty = make_learner(1);
  std::vector<Sample> window;
  for (int i = 0; i < 5; ++i) window.push_back({vec1(i), 10.0 + i, static_cast<std::size_t>(i)});

  const ReplayResult replay = frozen_replay(empty, window);
  CHECK(replay.substitutions == 5);
  CHECK(replay.predictions[0] == 10.0);  // first: its own target
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(replay.predictions[i] == window[i - 1].y);
  }

  // a perfect committee replays exactly and twice identically
  SymplerLearner perfect = make_learner(1);
  LocalModel m;
  m.weights = Vector(2);
  m.weights << 1.0, 10.0;  // y = x + 10
  m.point = vec1(0.0);
  perfect.models.push_back(m);
  const ReplayResult r1 = frozen_replay(perfect, window);
  const ReplayResult r2 = frozen_replay(perfect, window);
  CHECK(r1.substitutions == 0);
  CHECK(r1.predictions == r2.predictions);
  double loss = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    loss += std::pow(r1.predictions[i] - window[i].y, 2);
  }
  CHECK(loss == 0.0);
  CHECK(forgetting_ratio(0.0, 0.0) == 0.0);  // the degenerate perfect model
}

TEST_CASE("protocol on the two-regime stream") {
  const auto data = testsup::make_two_regime_stream(2024);
  const SplitSpec split{data.warmup, data.update, data.eval};
  const ProtocolRun run = run_clear_protocol_detailed(data.stream, split, {});

  CHECK(run.report.model_count >= 2);
  CHECK(run.report.loss_ww > 0.0);
  CHECK(run.report.sentinel_substitutions == 0);
  CHECK(run.report.forgetting_ratio ==
        forgetting_ratio(run.report.loss_ww, run.report.loss_wu));

  SUBCASE("a frozen committee loses nothing by definition") {
    const auto again = frozen_replay(run.learner,
                                     {data.stream.data(), data.warmup});
    const auto again2 = frozen_replay(run.learner,
                                      {data.stream.data(), data.warmup});
    CHECK(again.predictions == again2.predictions);
  }

  SUBCASE("dropping post-warmup models restores the warmup loss exactly") {
    SymplerLearner surgery = run.learner;
    std::erase_if(surgery.models, [&](const LocalModel& m) {
      return m.created_at >= data.warmup;
    });
    const auto replay = frozen_replay(surgery, {data.stream.data(), data.warmup});
    double sum = 0.0;
    for (std::size_t i = 0; i < data.warmup; ++i) {
      sum += std::pow(replay.predictions[i] - data.stream[i].y, 2);
    }
    const double loss = std::sqrt(sum / static_cast<double>(data.warmup));
    CHECK(loss == run.report.loss_ww);  // exact, not approximate
  }

  SUBCASE("the committee forgets less than an offline refit") {
    const std::vector<Sample> warmup(data.stream.begin(),
                                     data.stream.begin() + data.warmup);
    const std::vector<Sample> update(
        data.stream.begin() + data.warmup,
        data.stream.begin() + data.warmup + data.update);
    const OfflineRidge on_warmup = fit_offline_ridge(warmup, 1e-6);
    const OfflineRidge refit = fit_offline_ridge(update, 1e-6);
    double se_w = 0.0;
    double se_u = 0.0;
    for (const Sample& s : warmup) {
      se_w += std::pow(s.y - predict(on_warmup, s.x), 2);
      se_u += std::pow(s.y - predict(refit, s.x), 2);
    }
    const double ww = std::sqrt(se_w / warmup.size());
    const double wu = std::sqrt(se_u / warmup.size());
    CHECK(run.report.forgetting_ratio < forgetting_ratio(ww, wu));
  }
}

TEST_CASE("protocol split validation") {
  const auto data = testsup::make_two_regime_stream(1);
  CHECK_THROWS_AS(
      run_clear_protocol(data.stream, {0, 500, 500}, {}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      run_clear_protocol(data.stream, {100, 100, 100}, {}),
      std::invalid_argument);
}

TEST_CASE("standardization") {
  const auto data = testsup::make_two_regime_stream(5);
  const StandardizationStats stats = compute_stats(data.stream);

  SUBCASE("identity stats change nothing") {
    StandardizationStats id;
    id.means = Vector::Zero(2);
    id.stds = Vector::Ones(2);
    const auto z = standardize(data.stream, id);
    CHECK(z[10].x == data.stream[10].x);
    CHECK(z[10].y == data.stream[10].y);
  }

  SUBCASE("own stats give zero mean and unit spread") {
    const auto z = standardize(data.stream, stats);
    const StandardizationStats after = compute_stats(z);
    CHECK(after.means(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(after.means(1)) < 1e-12);
    CHECK(after.stds(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(after.stds(1) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("round trip is the identity") {
    const auto z = standardize(data.stream, stats);
    const auto back = destandardize(z, stats);
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].y == doctest::Approx(data.stream[i].y).epsilon(1e-12));
      CHECK(back[i].x(0) == doctest::Approx(data.stream[i].x(0)).epsilon(1e-12));
    }
  }

  SUBCASE("constant columns pass through without NaNs") {
    std::vector<Sample> flat;
    for (int i = 0; i < 4; ++i) flat.push_back({vec1(2.0), 3.0, static_cast<std::size_t>(i)});
    const StandardizationStats fstats = compute_stats(flat);
    CHECK(fstats.stds(0) == 0.0);
    const auto z = standardize(flat, fstats);
    CHECK(z[0].x(0) == 0.0);  // (2 - 2) / 1
    CHECK(std::isfinite(z[0].y));
  }

  SUBCASE("column-count mismatch throws") {
    StandardizationStats bad;
    bad.means = Vector::Zero(3);
    bad.stds = Vector::Ones(3);
    CHECK_THROWS_AS(standardize(data.stream, bad), std::invalid_argument);
  }
}

TEST_CASE("destandardized models predict in original units") {
  Rng rng(31);
  StandardizationStats stats;
  stats.means = Vector(3);
  stats.means << 5.0, -2.0, 100.0;
  stats.stds = Vector(3);
  stats.stds << 2.0, 0.5, 30.0;

  LocalModel model;
  model.weights = Vector(3);
  model.weights << 1.2, -0.7, 0.3;
  model.point = Vector(2);
  model.point << 0.5, -0.25;
  const LocalModel original_units = destandardize_model(model, stats);

  for (int t = 0; t < 20; ++t) {
    Vector x(2);
    x << 5.0 + 4.0 * rng.normal(), -2.0 + rng.normal();
    const double via_standardized =
        destandardize_target(predict(model, standardize_input(x, stats)), stats);
    CHECK(predict(original_units, x) ==
          doctest::Approx(via_standardized).epsilon(1e-12));
  }
  // the approximation point maps back too
  CHECK(original_units.point(0) == doctest::Approx(5.0 + 2.0 * 0.5));
  CHECK(original_units.point(1) == doctest::Approx(-2.0 + 0.5 * -0.25));
}

TEST_CASE("reported fitting error survives persistence") {
  const auto data = testsup::make_two_regime_stream(77);
  const SplitSpec split{data.warmup, data.update, data.eval};
  const ProtocolRun run = run_clear_protocol_detailed(data.stream, split, {});

  const auto dir = std::filesystem::temp_directory_path() / "sympler_eval_test";
  std::filesystem::create_directories(dir);
  const auto snap_path = dir / "snapshot.json";
  const auto csv_path = dir / "stream.csv";
  save_snapshot(run.learner, snap_path);
  DatasetSchema schema;
  schema.feature_columns = {"x"};
  schema.target_column = "y";
  write_samples_csv(csv_path, data.stream, schema);

  const SymplerLearner loaded = load_snapshot(snap_path);
  const auto reloaded = load_csv(csv_path, schema);
  const std::size_t fit_len = data.warmup + data.update;
  const auto replay = frozen_replay(loaded, {reloaded.data(), fit_len});
  double sum = 0.0;
  for (std::size_t i = 0; i < fit_len; ++i) {
    sum += std::pow(replay.predictions[i] - reloaded[i].y, 2);
  }
  CHECK(std::sqrt(sum / static_cast<double>(fit_len)) ==
        doctest::Approx(run.report.fitting_rmse).epsilon(1e-12));
  std::filesystem::remove_all(dir);
}
