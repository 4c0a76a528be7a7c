#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "decnet/error.hpp"

namespace decnet {

// Single random stream used by one evaluation or one sampler chain.
// Never share a RandomSource between threads; derive independent streams
// with derive_stream instead.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Second parameter is the variance, not the standard deviation.
  double normal(double location, double variance) {
    return std::normal_distribution<double>(location, std::sqrt(variance))(engine_);
  }

  // Rate fixed at 1.
  double gamma(double shape) {
    return std::gamma_distribution<double>(shape, 1.0)(engine_);
  }

  // Trials until the process stops, where continue_p is the per-step
  // continuation probability. Support starts at 1; mean 1/(1-continue_p).
  std::int64_t geometric(double continue_p) {
    if (continue_p >= 1.0) fail(ErrorKind::InvalidParameter, "geometric: continuation probability must be < 1 to sample");
    return 1 + std::geometric_distribution<std::int64_t>(1.0 - continue_p)(engine_);
  }

  // Index draw from nonnegative weights (need not be normalized).
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

  std::size_t uniform_index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  std::uint64_t next_u64() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 step; decorrelates per-world streams from a base seed so that
// sharded sampling is deterministic regardless of worker count.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace decnet
