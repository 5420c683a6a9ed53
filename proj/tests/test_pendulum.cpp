#include "sympler/pendulum.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace sympler;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("tangent lines of the pendulum acceleration") {
  const PendulumConfig cfg;
  const TaylorLine at_zero = taylor_line(0.0, cfg);
  CHECK(at_zero.slope == doctest::Approx(-19.62));
  CHECK(at_zero.bias == doctest::Approx(0.0));

  const TaylorLine at_horizontal = taylor_line(kPi / 2, cfg);
  CHECK(at_horizontal.slope == doctest::Approx(0.0));
  CHECK(at_horizontal.bias == doctest::Approx(-19.62));

  const TaylorLine mid = taylor_line(0.44, cfg);
  CHECK(mid.slope == doctest::Approx(-19.62 * std::cos(0.44)).epsilon(1e-12));
  CHECK(mid.slope == doctest::Approx(-17.78).epsilon(0.003));
  CHECK(mid.bias == doctest::Approx(-0.53).epsilon(0.05));
}

TEST_CASE("measured period matches the elliptic-integral value") {
  const PendulumConfig cfg;
  const double period = measure_period(cfg);
  // amplitude pi/2 runs 1.18034x slower than the small-angle period
  const double expected = 1.180340599 * 2.0 * kPi * std::sqrt(cfg.rod / cfg.g);
  CHECK(std::abs(period - expected) / expected < 0.01);
  CHECK(period == doctest::Approx(1.67).epsilon(0.01));

  // 100 cycles span roughly 167 seconds
  CHECK(100.0 * period == doctest::Approx(167.0).epsilon(0.01));
}

TEST_CASE("period grows with the rod and starts anywhere on the orbit") {
  PendulumConfig cfg;
  const double t1 = measure_period(cfg);
  PendulumConfig longer = cfg;
  longer.rod = 1.0;
  CHECK(measure_period(longer) == doctest::Approx(t1 * std::sqrt(2.0)).epsilon(0.01));

  // starting mid-swing with the matching velocity keeps the same orbit
  const auto records = simulate_steps(cfg, 100);
  PendulumConfig mid = cfg;
  mid.theta0 = records[100].theta;
  mid.omega0 = records[100].omega;
  CHECK(measure_period(mid) == doctest::Approx(t1).epsilon(1e-3));
}

TEST_CASE("simulation conserves energy") {
  const PendulumConfig cfg;
  const auto records = simulate(cfg);  // two cycles
  const double scale = cfg.g * cfg.rod;
  const auto energy = [&](const PendulumRecord& r) {
    return 0.5 * (cfg.rod * r.omega) * (cfg.rod * r.omega) -
           cfg.g * cfg.rod * std::cos(r.theta);
  };
  const double e0 = energy(records.front());
  for (const PendulumRecord& r : records) {
    CHECK(std::abs(energy(r) - e0) / scale < 1e-6);
  }
}

TEST_CASE("finite-difference estimates track the true signals") {
  const PendulumConfig cfg;
  const auto records = simulate(cfg);
  const double k = cfg.g / cfg.rod;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].a_est.has_value()) continue;
    CHECK(std::abs(*records[i].a_est - (-k * std::sin(records[i].theta))) <= 1e-2);
  }
  // boundary availability: one-sided at the start, one step late at the end
  CHECK_FALSE(records.front().v_est.has_value());
  CHECK_FALSE(records.front().a_est.has_value());
  CHECK(records[1].a_est.has_value());
  CHECK_FALSE(records.back().a_est.has_value());
  CHECK(records.back().v_est.has_value());
}

TEST_CASE("the central second difference is exact on quadratics") {
  const double dt = 0.005;
  for (int kk = 1; kk < 20; ++kk) {
    const auto th = [&](int i) {
      const double t = i * dt;
      return t * t;
    };
    const double a = (th(kk + 1) - 2.0 * th(kk) + th(kk - 1)) / (dt * dt);
    CHECK(a == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("RK4 shows fourth-order convergence") {
  PendulumConfig coarse;
  coarse.dt = 1.0 / 50.0;
  PendulumConfig half = coarse;
  half.dt = coarse.dt / 2.0;
  PendulumConfig reference = coarse;
  reference.dt = coarse.dt / 64.0;

  const std::size_t steps = 80;  // ~1.6 s
  const auto sol_c = simulate_steps(coarse, steps);
  const auto sol_h = simulate_steps(half, 2 * steps);
  const auto sol_r = simulate_steps(reference, 64 * steps);

  double err_c = 0.0;
  double err_h = 0.0;
  for (std::size_t i = 0; i <= steps; ++i) {
    err_c = std::max(err_c, std::abs(sol_c[i].theta - sol_r[64 * i].theta));
    err_h = std::max(err_h, std::abs(sol_h[2 * i].theta - sol_r[64 * i].theta));
  }
  const double ratio = err_c / err_h;
  CHECK(ratio >= 8.0);
  CHECK(ratio <= 32.0);
}

TEST_CASE("config validation") {
  PendulumConfig bad;
  bad.rod = 0.0;
  CHECK_THROWS_AS(measure_period(bad), std::invalid_argument);
  PendulumConfig coarse;
  coarse.dt = 0.2;  // ten samples would span more than one period
  CHECK_THROWS_AS(measure_period(coarse), std::invalid_argument);
  PendulumConfig still;
  still.theta0 = 0.0;
  still.omega0 = 0.0;  // equilibrium never oscillates
  CHECK_THROWS_AS(measure_period(still), std::runtime_error);
}

TEST_CASE("series period measurement") {
  const double dt = 0.01;
  std::vector<double> series;
  for (int i = 0; i < 1000; ++i) series.push_back(std::cos(2.0 * kPi * i * dt / 3.3));
  CHECK(measure_period_of_series(series, dt) == doctest::Approx(3.3).epsilon(0.01));
  CHECK_THROWS_AS(measure_period_of_series({1.0, 2.0, 3.0}, dt), std::runtime_error);
}
