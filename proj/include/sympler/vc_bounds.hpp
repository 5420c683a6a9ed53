#pragma once

#include <cstddef>
#include <vector>

namespace sympler {

/// Inputs of the VC generalization bound: VC dimension h, training-set size
/// l, confidence parameter eta, and the bound constants a1, a2, c (all 1 in
/// the practical setting).
///
/// l is kept real-valued: the bound equation is solved over a continuous l
/// and only the buffer-size rule rounds to an integer.
struct BoundQuery {
  std::size_t h = 1;
  double l = 1.0;
  double eta = 0.01;
  double a1 = 1.0;
  double a2 = 1.0;
  double c = 1.0;
};

/// One row of the bound table: the exact boundary training size l_star for
/// VC dimension h, next to the practical buffer-size rule evaluated at the
/// matching number of inputs (n = h - 1 for a linear model with bias).
struct BoundSolution {
  std::size_t h = 0;
  double l_star = 0.0;
  std::size_t l_rule = 0;
};

/// epsilon = a1 * (h*(ln(a2*l/h) + 1) - ln(eta/4)) / l.
/// Throws std::domain_error for h = 0, l <= 0 or eta outside (0, 1).
double epsilon(const BoundQuery& q);

/// Expected-risk bound emp_risk / (1 - c*sqrt(epsilon))_+ given a
/// precomputed epsilon. Returns +infinity when the denominator clamps to
/// zero or below (epsilon >= 1/c^2): the training error then says nothing
/// about the test error.
double risk_bound_given_epsilon(double emp_risk, double eps, double c);

/// Same bound with epsilon evaluated from the query.
double risk_bound(double emp_risk, const BoundQuery& q);

/// The unique l > h with epsilon(h, l, eta) = 1: the boundary between a
/// finite and an infinite risk bound. Bisection over [h, 10h + 100] to
/// absolute tolerance 1e-6; the bracket is widened once (x10) if needed.
double min_training_size(std::size_t h, double eta = 0.01);

/// Practical buffer-size rule for a problem with n input features
/// (bias excluded): 2(n+1) + 10.
std::size_t buffer_size(std::size_t n);

/// Bound solutions for every h in 1..h_max.
std::vector<BoundSolution> bound_table(std::size_t h_max, double eta = 0.01);

}  // namespace sympler
