#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

namespace sympler {

/// Undamped pendulum setup. Defaults reproduce a 0.5 m rod released from
/// the horizontal and sampled at 200 Hz.
struct PendulumConfig {
  double rod = 0.5;               ///< rod length, m
  double g = 9.81;                ///< gravity, m/s^2
  double dt = 1.0 / 200.0;        ///< sampling period, s
  double theta0 = std::numbers::pi / 2.0;  ///< initial angle, rad
  double omega0 = 0.0;            ///< initial angular velocity, rad/s
  double cycles = 2.0;            ///< duration in oscillation periods
};

/// One simulation step: the integrated truth plus the finite-difference
/// estimates a sensor-style consumer would actually see. v_est uses the
/// backward difference; a_est uses the central second difference, which
/// requires the next angle and is therefore available one step late.
struct PendulumRecord {
  double t = 0.0;
  double theta = 0.0;
  double omega = 0.0;
  std::optional<double> v_est;
  std::optional<double> a_est;
};

/// First-order expansion of -(g/rod) sin(theta) around theta0.
struct TaylorLine {
  double theta0 = 0.0;
  double slope = 0.0;  ///< -(g/rod) cos(theta0)
  double bias = 0.0;   ///< -(g/rod) (sin(theta0) - theta0 cos(theta0))
};

TaylorLine taylor_line(double theta0, const PendulumConfig& cfg);

/// Oscillation period of the trajectory starting at (theta0, omega0),
/// measured as twice the spacing of consecutive zero crossings of omega
/// (sub-step accuracy via linear interpolation). Amplitude-dependent.
double measure_period(const PendulumConfig& cfg);

/// RK4 integration for a fixed number of steps; returns steps+1 records.
std::vector<PendulumRecord> simulate_steps(const PendulumConfig& cfg,
                                           std::size_t steps);

/// RK4 integration over cfg.cycles measured periods.
std::vector<PendulumRecord> simulate(const PendulumConfig& cfg);

/// Period of a recorded angle series (down-crossings of zero), used to
/// measure the apparent period of forecast trajectories.
double measure_period_of_series(const std::vector<double>& theta, double dt);

}  // namespace sympler
