#include "metacog/benchgen.hpp"

#include <cstdio>
#include <utility>

#include "metacog/rng.hpp"

namespace metacog {

namespace {

constexpr std::array<const char*, kAnswerAlphabetSize> kAnswerAlphabet{"A", "B", "C", "D"};

std::string format_id(const char* prefix, std::size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%03zu", prefix, ordinal);
  return buf;
}

void assign_answers(Task& task, Rng& rng) {
  const auto truth = rng.index(kAnswerAlphabetSize);
  task.ground_truth = kAnswerAlphabet[truth];
  task.distractors.clear();
  for (std::size_t i = 0; i < kAnswerAlphabetSize; ++i) {
    if (i != truth) task.distractors.emplace_back(kAnswerAlphabet[i]);
  }
}

std::vector<std::pair<Dimension, Dimension>> unordered_pairs() {
  std::vector<std::pair<Dimension, Dimension>> pairs;
  for (std::size_t a = 0; a < kDimensionCount; ++a) {
    for (std::size_t b = a + 1; b < kDimensionCount; ++b) {
      pairs.emplace_back(kAllDimensions[a], kAllDimensions[b]);
    }
  }
  return pairs;
}

}  // namespace

std::size_t BenchmarkSpec::total() const {
  std::size_t n = cross_domain_count;
  for (const auto& row : per_cell_counts) {
    for (std::size_t c : row) n += c;
  }
  return n;
}

BenchmarkSpec default_benchmark_spec(std::uint64_t seed) {
  BenchmarkSpec spec;
  spec.per_cell_counts = {{
      {42, 38, 40},  // LR
      {38, 42, 40},  // KR
      {40, 38, 42},  // CG
      {41, 40, 39},  // MC
      {39, 42, 39},  // CI
  }};
  spec.cross_domain_count = 100;
  spec.seed = seed;
  return spec;
}

std::vector<Task> generate(const BenchmarkSpec& spec) {
  Rng rng(derive_seed(spec.seed, {0xbe4c'0001ULL}));
  std::vector<Task> tasks;
  tasks.reserve(spec.total());

  for (Dimension d : kAllDimensions) {
    const auto& row = spec.per_cell_counts[dimension_index(d)];
    for (std::size_t tier = 0; tier < kTierCount; ++tier) {
      const Difficulty difficulty = kAllDifficulties[tier];
      const std::string prefix = std::string(to_string(d)) + "-" + std::string(to_string(difficulty));
      for (std::size_t k = 0; k < row[tier]; ++k) {
        Task task;
        task.id = format_id(prefix.c_str(), k + 1);
        task.dimensions = {d};
        task.difficulty = difficulty;
        task.prompt = "[" + std::string(to_string(d)) + "/" + std::string(to_string(difficulty)) +
                      "] synthetic task " + std::to_string(k + 1);
        assign_answers(task, rng);
        tasks.push_back(std::move(task));
      }
    }
  }

  const auto pairs = unordered_pairs();
  for (std::size_t k = 0; k < spec.cross_domain_count; ++k) {
    const auto& [a, b] = pairs[rng.index(pairs.size())];
    Task task;
    task.id = format_id("Cross", k + 1);
    task.dimensions = {a, b};
    task.difficulty = Difficulty::Cross;
    task.prompt = "[" + std::string(to_string(a)) + "+" + std::string(to_string(b)) +
                  "/Cross] synthetic task " + std::to_string(k + 1);
    assign_answers(task, rng);
    tasks.push_back(std::move(task));
  }

  // Fisher-Yates; std::shuffle's algorithm is unspecified.
  for (std::size_t i = tasks.size(); i > 1; --i) {
    std::swap(tasks[i - 1], tasks[rng.index(i)]);
  }
  return tasks;
}

std::vector<CellDiff> validate(const std::vector<Task>& tasks, const BenchmarkSpec& spec) {
  std::array<std::array<std::size_t, kTierCount>, kDimensionCount> counts{};
  std::size_t cross = 0;
  for (const Task& task : tasks) {
    if (task.difficulty == Difficulty::Cross) {
      ++cross;
    } else if (task.dimensions.size() == 1) {
      ++counts[dimension_index(task.dimensions.front())][static_cast<std::size_t>(task.difficulty)];
    }
  }

  std::vector<CellDiff> diff;
  for (Dimension d : kAllDimensions) {
    for (std::size_t tier = 0; tier < kTierCount; ++tier) {
      const auto expected = spec.per_cell_counts[dimension_index(d)][tier];
      const auto actual = counts[dimension_index(d)][tier];
      if (expected != actual) {
        diff.push_back({std::string(to_string(d)) + "/" + std::string(to_string(kAllDifficulties[tier])),
                        expected, actual});
      }
    }
  }
  if (cross != spec.cross_domain_count) diff.push_back({"Cross", spec.cross_domain_count, cross});
  return diff;
}

}  // namespace metacog
