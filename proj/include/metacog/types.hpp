#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace metacog {

// Roster position. Agents are addressed by index everywhere inside the engine;
// the human-readable id lives on AgentSpec.
using AgentId = std::size_t;

enum class Dimension : unsigned char { LR = 0, KR, CG, MC, CI };
inline constexpr std::size_t kDimensionCount = 5;
inline constexpr std::array<Dimension, kDimensionCount> kAllDimensions{
    Dimension::LR, Dimension::KR, Dimension::CG, Dimension::MC, Dimension::CI};

enum class Difficulty : unsigned char { Easy = 0, Medium, Hard, Cross };
inline constexpr std::size_t kDifficultyCount = 4;
inline constexpr std::size_t kTierCount = 3;  // Easy, Medium, Hard
inline constexpr std::array<Difficulty, kDifficultyCount> kAllDifficulties{
    Difficulty::Easy, Difficulty::Medium, Difficulty::Hard, Difficulty::Cross};

// Thrown for malformed domain values: unknown labels, broken task invariants.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string_view to_string(Dimension d);
std::string_view to_string(Difficulty d);
Dimension parse_dimension(std::string_view label);
Difficulty parse_difficulty(std::string_view label);

// Index into per-dimension arrays; throws DomainError naming the raw value
// when the enum holds something outside the five labels.
std::size_t dimension_index(Dimension d);

struct Task {
  std::string id;
  std::string prompt;
  std::vector<Dimension> dimensions;  // sorted, unique, non-empty
  Difficulty difficulty = Difficulty::Easy;
  std::string ground_truth;
  std::vector<std::string> distractors;

  bool cross_domain() const { return dimensions.size() >= 2; }
};

// Checks every Task invariant; throws DomainError describing the first
// violation.
void validate_task(const Task& task);

}  // namespace metacog
