#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metacog/orchestrator.hpp"
#include "metacog/profile.hpp"
#include "metacog/types.hpp"

namespace metacog {

inline constexpr std::size_t kReliabilityBinCount = 10;

struct CalibrationRecord {
  double confidence = 0.0;
  bool correct = false;
};

struct ReliabilityBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  double mean_confidence = 0.0;
  double accuracy = 0.0;
};

// Bin k covers [k/10, (k+1)/10); the last bin also takes 1.0.
std::size_t reliability_bin_index(double confidence);
std::vector<ReliabilityBin> reliability_bins(std::span<const CalibrationRecord> records);

// Expected calibration error over ten equal-width bins. Throws
// std::invalid_argument on empty input.
double ece(std::span<const CalibrationRecord> records);

// Share of Delegated decisions whose outcome was correct. Collaborative
// decisions are not counted; empty when nothing was delegated.
std::optional<double> delegation_precision(std::span<const TaskRecord> records);

struct StratumAccuracy {
  std::string label;
  std::size_t count = 0;
  std::size_t correct = 0;
  std::optional<double> accuracy;  // empty for an empty stratum
};

struct StratifiedAccuracy {
  std::vector<StratumAccuracy> by_difficulty;  // Easy, Medium, Hard, Cross
  std::vector<StratumAccuracy> by_dimension;   // LR, KR, CG, MC, CI, Cross
  // Hard minus Easy accuracy in percentage points.
  std::optional<double> delta_easy_to_hard;
};

// Joins outcomes to tasks by id. Throws std::invalid_argument when an outcome
// has no matching task.
StratifiedAccuracy stratify(std::span<const Outcome> outcomes, std::span<const Task> tasks);
StratifiedAccuracy stratify(std::span<const TaskRecord> records);

// counts[i][j]: Delegated decisions from original agent i to executor j.
using FlowMatrix = std::vector<std::vector<std::size_t>>;
FlowMatrix delegation_flow(std::span<const TaskRecord> records, std::size_t roster_size);

struct ExperimentReport {
  std::string policy;
  std::uint64_t seed = 0;
  std::vector<std::string> agent_ids;
  std::size_t task_count = 0;
  std::size_t correct_count = 0;
  double overall_accuracy = 0.0;
  StratifiedAccuracy stratified;
  std::size_t direct_count = 0;
  std::size_t delegated_count = 0;
  std::size_t collaborative_count = 0;
  // Share of tasks where delegation was triggered (Delegated or Collaborative).
  double delegation_rate = 0.0;
  std::array<std::optional<double>, kDifficultyCount> delegation_rate_by_difficulty{};
  std::optional<double> delegation_precision;
  std::optional<double> ece;
  std::array<std::optional<double>, kDifficultyCount> ece_by_difficulty{};
  std::vector<ReliabilityBin> reliability;
  FlowMatrix delegation_flow;
  std::size_t total_api_calls = 0;
};

// Every report field is a function of the decision log alone.
ExperimentReport compute_report(std::span<const TaskRecord> records,
                                const std::vector<std::string>& agent_ids, std::string policy,
                                std::uint64_t seed);

std::vector<CalibrationRecord> calibration_records(std::span<const TaskRecord> records);

}  // namespace metacog
