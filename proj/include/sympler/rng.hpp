#pragma once

#include <cstdint>
#include <random>

namespace sympler {

/// Deterministic random source for the stochastic experiments.
///
/// Wraps the standard mt19937_64 stream (whose output is pinned by the
/// standard) and converts bits to doubles explicitly, so sequences do not
/// depend on library-specific distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform draw in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal draw (Box-Muller on explicit uniforms).
  double normal();

 private:
  /// Uniform draw in (0, 1]; keeps log() finite inside Box-Muller.
  double uniform_positive() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Child seed for stream `stream` of a run seeded with `seed`. Gives
/// experiment repetitions disjoint, order-independent random streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sympler
