#include "metacog/types.hpp"

#include <algorithm>

namespace metacog {

namespace {

constexpr std::array<std::string_view, kDimensionCount> kDimensionLabels{"LR", "KR", "CG",
                                                                        "MC", "CI"};
constexpr std::array<std::string_view, kDifficultyCount> kDifficultyLabels{"Easy", "Medium",
                                                                          "Hard", "Cross"};

}  // namespace

std::size_t dimension_index(Dimension d) {
  const auto index = static_cast<std::size_t>(d);
  if (index >= kDimensionCount) {
    throw DomainError("unknown dimension label #" + std::to_string(index));
  }
  return index;
}

std::string_view to_string(Dimension d) { return kDimensionLabels[dimension_index(d)]; }

std::string_view to_string(Difficulty d) {
  const auto index = static_cast<std::size_t>(d);
  if (index >= kDifficultyCount) {
    throw DomainError("unknown difficulty #" + std::to_string(index));
  }
  return kDifficultyLabels[index];
}

Dimension parse_dimension(std::string_view label) {
  for (std::size_t i = 0; i < kDimensionCount; ++i) {
    if (kDimensionLabels[i] == label) return kAllDimensions[i];
  }
  throw DomainError("unknown dimension label '" + std::string(label) + "'");
}

Difficulty parse_difficulty(std::string_view label) {
  for (std::size_t i = 0; i < kDifficultyCount; ++i) {
    if (kDifficultyLabels[i] == label) return kAllDifficulties[i];
  }
  throw DomainError("unknown difficulty '" + std::string(label) + "'");
}

void validate_task(const Task& task) {
  const auto fail = [&](const std::string& what) {
    throw DomainError("task '" + task.id + "': " + what);
  };
  if (task.id.empty()) throw DomainError("task with empty id");
  if (task.dimensions.empty()) fail("no dimension labels");
  for (Dimension d : task.dimensions) dimension_index(d);
  if (!std::is_sorted(task.dimensions.begin(), task.dimensions.end()) ||
      std::adjacent_find(task.dimensions.begin(), task.dimensions.end()) !=
          task.dimensions.end()) {
    fail("dimension labels must be sorted and unique");
  }
  if ((task.difficulty == Difficulty::Cross) != task.cross_domain()) {
    fail("difficulty Cross must coincide with two or more dimensions");
  }
  if (task.distractors.empty()) fail("empty distractor set");
  if (std::find(task.distractors.begin(), task.distractors.end(), task.ground_truth) !=
      task.distractors.end()) {
    fail("ground truth appears among distractors");
  }
}

}  // namespace metacog
