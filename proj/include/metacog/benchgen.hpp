#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "metacog/types.hpp"

namespace metacog {

enum class PairPolicy {
  UniformPairs,  // each cross-domain task draws an unordered pair uniformly
};

struct BenchmarkSpec {
  // Task count per [dimension][Easy, Medium, Hard].
  std::array<std::array<std::size_t, kTierCount>, kDimensionCount> per_cell_counts{};
  std::size_t cross_domain_count = 0;
  std::uint64_t seed = 0;
  PairPolicy dimension_pair_policy = PairPolicy::UniformPairs;

  std::size_t total() const;
};

// The 700-task layout: LR 42/38/40, KR 38/42/40, CG 40/38/42, MC 41/40/39,
// CI 39/42/39 and 100 cross-domain tasks.
BenchmarkSpec default_benchmark_spec(std::uint64_t seed = 0);

inline constexpr std::size_t kAnswerAlphabetSize = 4;

// Deterministic in `spec`. Each task offers four candidate answers (A-D), one
// of which is the ground truth; cross-domain tasks carry exactly two
// dimensions and difficulty Cross. Output order is a seeded shuffle.
std::vector<Task> generate(const BenchmarkSpec& spec);

struct CellDiff {
  std::string cell;  // "LR/Easy", ..., "Cross"
  std::size_t expected = 0;
  std::size_t actual = 0;
};

// Recounts tasks per cell and lists every cell whose count differs from the
// spec. Order-insensitive.
std::vector<CellDiff> validate(const std::vector<Task>& tasks, const BenchmarkSpec& spec);

}  // namespace metacog
