#pragma once

#include <cstdint>
#include <random>

namespace tasbm {

// Portable sampling on top of std::mt19937_64, whose output sequence is fixed
// by the standard. The std:: distributions are implementation-defined, so the
// generator uses these instead to keep (spec, seed) -> graph identical across
// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer on [lo, hi], inclusive. Unbiased (rejection sampling).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform() < p; }

  // Poisson(mean). Multiplication method below mean 30, Hormann's PTRS
  // transformed rejection above.
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t poisson_small(double mean);
  std::uint64_t poisson_ptrs(double mean);

  std::mt19937_64 engine_;
};

// Derives a well-mixed sub-seed (SplitMix64 finalizer) so that nested
// experiments can use independent streams from one master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace tasbm
