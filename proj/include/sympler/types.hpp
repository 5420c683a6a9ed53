#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace sympler {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// One observation of a streaming regression problem: feature vector,
/// scalar target, and the stream position at which it arrived.
struct Sample {
  Vector x;
  double y = 0.0;
  std::size_t index = 0;
};

}  // namespace sympler
