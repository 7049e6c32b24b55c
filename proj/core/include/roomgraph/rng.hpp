#pragma once

#include <cstdint>

namespace roomgraph {

// Self-contained PRNG (splitmix64-seeded xoshiro256++) with fixed algorithms
// for uniform/normal draws. The standard <random> distributions are
// implementation-defined, which would make generated maps differ between
// standard libraries; every sampling algorithm here is pinned so a seed
// produces identical bytes everywhere.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform01();

  // Uniform double in [lo, hi); returns lo when the interval is empty.
  double uniform(double lo, double hi);

  // Uniform integer in [lo, hi], inclusive on both ends.
  int uniform_int(int lo, int hi);

  bool bernoulli(double p);

  // Standard normal via Box-Muller; second value of each pair is cached.
  double normal();
  double normal(double mean, double stddev);

  // Derived independent stream; `stream` selects the substream. Used to keep
  // e.g. noise draws independent from layout draws under one map seed.
  RandomSource fork(std::uint64_t stream) const;

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace roomgraph
