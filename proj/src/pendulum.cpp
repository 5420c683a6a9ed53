#include "sympler/pendulum.hpp"

#include <cmath>
#include <stdexcept>

namespace sympler {

namespace {

struct State {
  double theta;
  double omega;
};

State rk4_step(const State& s, double dt, double g_over_rod) {
  const auto accel = [g_over_rod](double th) { return -g_over_rod * std::sin(th); };

  const double k1_th = s.omega;
  const double k1_om = accel(s.theta);
  const double k2_th = s.omega + 0.5 * dt * k1_om;
  const double k2_om = accel(s.theta + 0.5 * dt * k1_th);
  const double k3_th = s.omega + 0.5 * dt * k2_om;
  const double k3_om = accel(s.theta + 0.5 * dt * k2_th);
  const double k4_th = s.omega + dt * k3_om;
  const double k4_om = accel(s.theta + dt * k3_th);

  return {s.theta + dt / 6.0 * (k1_th + 2.0 * k2_th + 2.0 * k3_th + k4_th),
          s.omega + dt / 6.0 * (k1_om + 2.0 * k2_om + 2.0 * k3_om + k4_om)};
}

void validate(const PendulumConfig& cfg) {
  if (!(cfg.rod > 0.0) || !(cfg.g > 0.0) || !(cfg.dt > 0.0) || !(cfg.cycles > 0.0)) {
    throw std::invalid_argument("pendulum: rod, g, dt and cycles must be positive");
  }
}

}  // namespace

TaylorLine taylor_line(double theta0, const PendulumConfig& cfg) {
  const double k = cfg.g / cfg.rod;
  return {theta0, -k * std::cos(theta0),
          -k * (std::sin(theta0) - theta0 * std::cos(theta0))};
}

double measure_period(const PendulumConfig& cfg) {
  validate(cfg);
  const double g_over_rod = cfg.g / cfg.rod;

  State s{cfg.theta0, cfg.omega0};
  double crossings[2];
  int found = 0;
  // generous cap; the default setup crosses twice within ~700 steps
  constexpr std::size_t kMaxSteps = 5'000'000;
  for (std::size_t k = 0; k < kMaxSteps && found < 2; ++k) {
    const State next = rk4_step(s, cfg.dt, g_over_rod);
    const double t = static_cast<double>(k) * cfg.dt;
    if (s.omega * next.omega < 0.0) {
      crossings[found++] = t + cfg.dt * s.omega / (s.omega - next.omega);
    } else if (next.omega == 0.0 && s.omega != 0.0) {
      crossings[found++] = t + cfg.dt;
    }
    s = next;
  }
  if (found < 2) {
    throw std::runtime_error("measure_period: no oscillation detected");
  }
  const double period = 2.0 * (crossings[1] - crossings[0]);
  if (10.0 * cfg.dt >= period) {
    throw std::invalid_argument("pendulum: dt too coarse for the oscillation period");
  }
  return period;
}

std::vector<PendulumRecord> simulate_steps(const PendulumConfig& cfg,
                                           std::size_t steps) {
  validate(cfg);
  const double g_over_rod = cfg.g / cfg.rod;

  std::vector<PendulumRecord> records(steps + 1);
  State s{cfg.theta0, cfg.omega0};
  for (std::size_t k = 0; k <= steps; ++k) {
    records[k].t = static_cast<double>(k) * cfg.dt;
    records[k].theta = s.theta;
    records[k].omega = s.omega;
    if (k < steps) s = rk4_step(s, cfg.dt, g_over_rod);
  }
  for (std::size_t k = 1; k <= steps; ++k) {
    records[k].v_est = (records[k].theta - records[k - 1].theta) / cfg.dt;
    if (k + 1 <= steps) {
      records[k].a_est = (records[k + 1].theta - 2.0 * records[k].theta +
                          records[k - 1].theta) /
                         (cfg.dt * cfg.dt);
    }
  }
  return records;
}

std::vector<PendulumRecord> simulate(const PendulumConfig& cfg) {
  const double period = measure_period(cfg);
  const auto steps =
      static_cast<std::size_t>(std::ceil(cfg.cycles * period / cfg.dt));
  return simulate_steps(cfg, steps);
}

double measure_period_of_series(const std::vector<double>& theta, double dt) {
  double down[2];
  int found = 0;
  for (std::size_t k = 0; k + 1 < theta.size() && found < 2; ++k) {
    if (theta[k] > 0.0 && theta[k + 1] <= 0.0) {
      down[found++] =
          static_cast<double>(k) * dt + dt * theta[k] / (theta[k] - theta[k + 1]);
    }
  }
  if (found < 2) {
    throw std::runtime_error("measure_period_of_series: fewer than two down-crossings");
  }
  return down[1] - down[0];
}

}  // namespace sympler
