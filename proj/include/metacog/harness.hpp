#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metacog/config.hpp"
#include "metacog/metrics.hpp"
#include "metacog/orchestrator.hpp"
#include "metacog/profile.hpp"
#include "metacog/types.hpp"

namespace metacog {

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<TaskRecord> records;
  std::vector<CapabilityProfile> initial_profiles;
  std::vector<CapabilityProfile> final_profiles;
  ExperimentReport report;
};

std::vector<std::string> agent_ids(const ExperimentConfig& config);

// The benchmark a run with `seed` sees: the file at benchmark_path, or the
// generation spec seeded with benchmark_seed (falling back to `seed`).
std::vector<Task> load_tasks(const ExperimentConfig& config, std::uint64_t seed);

// One seeded pass of the configured policy over the benchmark, in order.
// Writes nothing.
RunResult run_single(const ExperimentConfig& config, std::uint64_t seed);

// Writes decisions.jsonl, profiles.json, report.json and the report CSVs
// into `dir`.
void persist_run(const std::filesystem::path& dir, const RunResult& result,
                 const std::vector<std::string>& ids);

struct AggregateRow {
  std::string label;  // seed number, "mean" or "stddev"
  double accuracy = 0.0;
  double delegation_rate = 0.0;
  std::optional<double> delegation_precision;
  std::optional<double> ece;
  double api_calls = 0.0;
};

// Per-seed rows followed by mean and sample standard deviation rows.
// Optional metrics aggregate over the seeds that define them.
std::vector<AggregateRow> aggregate(const std::vector<RunResult>& runs);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);

// Runs every configured seed. With an output directory, each run lands in
// <out>/seed-<n>/ and the aggregate table in <out>/aggregate.csv.
std::vector<RunResult> run(const ExperimentConfig& config);

enum class SweepParameter { Theta, Lambda, Alpha };
SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);
std::vector<double> default_sweep_grid(SweepParameter p);

struct SweepRow {
  double value = 0.0;
  double accuracy = 0.0;  // mean over the configured seeds
  double delegation_rate = 0.0;
  double api_calls = 0.0;
};

// One experiment per value with every other parameter left as configured.
// All values are checked before the first run; an illegal one throws
// ConfigError.
std::vector<SweepRow> sweep(const ExperimentConfig& config, SweepParameter parameter,
                            const std::vector<double>& values);
std::string sweep_csv(SweepParameter parameter, const std::vector<SweepRow>& rows);

struct AblationRow {
  std::string variant;
  double accuracy = 0.0;
  double delta = 0.0;  // percentage points against the full system
  std::optional<double> delegation_precision;
  double delegation_rate = 0.0;
};

// Variant names in output order.
std::vector<std::pair<std::string, Ablation>> ablation_variants();

// Full system plus the five single-component removals, same seeds.
std::vector<AblationRow> ablate(const ExperimentConfig& config);
std::string ablation_csv(const std::vector<AblationRow>& rows);

}  // namespace metacog
