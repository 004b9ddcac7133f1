#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace metacog {

// Seeded random source with fully specified transforms. The std::*_distribution
// templates are implementation-defined, so uniform/normal draws are derived
// from raw mt19937_64 output here to keep runs byte-identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  // Standard normal via Box-Muller.
  double normal();
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform integer on [0, n); n must be positive.
  std::uint64_t index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent substream seed from a base seed and a path of tags
// (task index, agent index, purpose). Order of tags matters.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

}  // namespace metacog
