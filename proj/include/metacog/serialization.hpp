#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "metacog/metrics.hpp"
#include "metacog/orchestrator.hpp"
#include "metacog/profile.hpp"
#include "metacog/types.hpp"

namespace metacog {

using Json = nlohmann::ordered_json;

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File was readable but its content is malformed.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Benchmark line: {id, prompt, dimensions, difficulty, ground_truth, distractors}.
Json task_to_json(const Task& task);
Task task_from_json(const Json& j);

// Decision log line: the routing decision, its outcome and the task labels
// needed to stratify it.
Json record_to_json(const TaskRecord& record);
TaskRecord record_from_json(const Json& j);

Json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const Json& j);

// {agent_id: {dimension: {"value": p, "count": n}}}
Json profiles_to_json(const std::vector<std::string>& agent_ids,
                      const std::vector<CapabilityProfile>& profiles);
// Returns one profile per id in `agent_ids`; every id must be present.
std::vector<CapabilityProfile> profiles_from_json(const Json& j,
                                                  const std::vector<std::string>& agent_ids);

std::vector<CapabilityProfile> read_profiles(const std::filesystem::path& path,
                                             const std::vector<std::string>& agent_ids);

// Writes via a temporary sibling and rename so readers never see a partial
// file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

void write_benchmark(const std::filesystem::path& path, const std::vector<Task>& tasks);
std::vector<Task> read_benchmark(const std::filesystem::path& path);

std::string dump_decision_log(const std::vector<TaskRecord>& records);
void write_decision_log(const std::filesystem::path& path, const std::vector<TaskRecord>& records);
std::vector<TaskRecord> read_decision_log(const std::filesystem::path& path);

std::string dump_report(const ExperimentReport& report);
ExperimentReport read_report(const std::filesystem::path& path);

// One CSV per report section, written into `dir`: summary.csv,
// accuracy_by_difficulty.csv, accuracy_by_dimension.csv, reliability.csv,
// delegation_flow.csv.
void write_report_csvs(const std::filesystem::path& dir, const ExperimentReport& report);
std::string reliability_csv(const ExperimentReport& report);

}  // namespace metacog
