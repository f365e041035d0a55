#pragma once

#include <cstdint>
#include <random>

namespace bayesfuse {

/// splitmix64 finalizer; mixes a 64-bit state into a well-distributed output.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// A deterministic random stream addressed by (master seed, stream index).
///
/// Stream k is a mt19937_64 engine seeded with
///   splitmix64(master_seed + k * 0x9E3779B97F4A7C15),
/// so any worker can open any stream independently and two streams with
/// different indices never share a seed.  All sampling in the engine goes
/// through this class; given the master seed, every draw is reproducible.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : engine_(splitmix64(master_seed + stream_index * 0x9E3779B97F4A7C15ULL)) {}

  /// Uniform on [0, 1).
  double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  /// Uniform on the open interval (lo, hi); exact endpoints are redrawn so
  /// rate-parameter families never see a degenerate h.
  double uniform_open(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    double x = dist(engine_);
    while (x == lo || x == hi) x = dist(engine_);
    return x;
  }

  double normal() { return normal_(engine_); }

  double exponential(double rate) {
    return std::exponential_distribution<double>(rate)(engine_);
  }

  long poisson(double rate) {
    if (rate == 0.0) return 0;
    return std::poisson_distribution<long>(rate)(engine_);
  }

  /// Index into a discrete distribution given its cumulative weights
  /// (last entry must be the total).
  std::size_t categorical(const std::vector<double>& cumulative) {
    const double u = uniform01() * cumulative.back();
    std::size_t i = 0;
    while (i + 1 < cumulative.size() && u >= cumulative[i]) ++i;
    return i;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace bayesfuse
