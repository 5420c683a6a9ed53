#include "sympler/vc_bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sympler {

double epsilon(const BoundQuery& q) {
  if (q.h == 0) throw std::domain_error("epsilon: h must be >= 1");
  if (!(q.l > 0.0)) throw std::domain_error("epsilon: l must be positive");
  if (!(q.eta > 0.0 && q.eta < 1.0)) {
    throw std::domain_error("epsilon: eta must lie in (0, 1)");
  }
  const double h = static_cast<double>(q.h);
  return q.a1 * (h * (std::log(q.a2 * q.l / h) + 1.0) - std::log(q.eta / 4.0)) / q.l;
}

double risk_bound_given_epsilon(double emp_risk, double eps, double c) {
  if (emp_risk < 0.0) {
    throw std::domain_error("risk_bound: empirical risk must be nonnegative");
  }
  const double denom = 1.0 - c * std::sqrt(std::max(eps, 0.0));
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return emp_risk / denom;
}

double risk_bound(double emp_risk, const BoundQuery& q) {
  return risk_bound_given_epsilon(emp_risk, epsilon(q), q.c);
}

double min_training_size(std::size_t h, double eta) {
  if (h == 0) throw std::domain_error("min_training_size: h must be >= 1");
  const double hd = static_cast<double>(h);
  const auto excess = [&](double l) {
    return epsilon({.h = h, .l = l, .eta = eta}) - 1.0;
  };

  // epsilon(h, h) = 1 - ln(eta/4)/h > 1 for eta < 4, and epsilon is strictly
  // decreasing in l beyond that, so the left bracket end is always positive.
  double lo = hd;
  double hi = 10.0 * hd + 100.0;
  if (excess(hi) > 0.0) {
    hi *= 10.0;
    if (excess(hi) > 0.0) {
      throw std::runtime_error("min_training_size: no sign change in bracket");
    }
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::size_t buffer_size(std::size_t n) { return 2 * (n + 1) + 10; }

std::vector<BoundSolution> bound_table(std::size_t h_max, double eta) {
  if (h_max == 0) throw std::domain_error("bound_table: h_max must be >= 1");
  std::vector<BoundSolution> rows;
  rows.reserve(h_max);
  for (std::size_t h = 1; h <= h_max; ++h) {
    rows.push_back({h, min_training_size(h, eta), buffer_size(h - 1)});
  }
  return rows;
}

}  // namespace sympler
