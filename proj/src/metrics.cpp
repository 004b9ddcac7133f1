#include "metacog/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace metacog {

namespace {

double bin_edge(std::size_t k) { return static_cast<double>(k) / kReliabilityBinCount; }

struct Labeled {
  Difficulty difficulty;
  const std::vector<Dimension>* dimensions;
  bool success;
};

StratifiedAccuracy stratify_labeled(const std::vector<Labeled>& items) {
  StratifiedAccuracy out;
  for (Difficulty d : kAllDifficulties) out.by_difficulty.push_back({std::string(to_string(d)), 0, 0, std::nullopt});
  for (Dimension d : kAllDimensions) out.by_dimension.push_back({std::string(to_string(d)), 0, 0, std::nullopt});
  out.by_dimension.push_back({"Cross", 0, 0, std::nullopt});

  for (const Labeled& item : items) {
    auto& diff = out.by_difficulty[static_cast<std::size_t>(item.difficulty)];
    ++diff.count;
    diff.correct += item.success ? 1 : 0;

    const bool cross = item.dimensions->size() >= 2;
    auto& dim = cross ? out.by_dimension.back()
                      : out.by_dimension[dimension_index(item.dimensions->front())];
    ++dim.count;
    dim.correct += item.success ? 1 : 0;
  }
  const auto finish = [](StratumAccuracy& s) {
    if (s.count > 0) s.accuracy = static_cast<double>(s.correct) / static_cast<double>(s.count);
  };
  for (auto& s : out.by_difficulty) finish(s);
  for (auto& s : out.by_dimension) finish(s);

  const auto& easy = out.by_difficulty[static_cast<std::size_t>(Difficulty::Easy)];
  const auto& hard = out.by_difficulty[static_cast<std::size_t>(Difficulty::Hard)];
  if (easy.accuracy && hard.accuracy) out.delta_easy_to_hard = 100.0 * (*hard.accuracy - *easy.accuracy);
  return out;
}

}  // namespace

std::size_t reliability_bin_index(double confidence) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw std::invalid_argument("confidence outside [0, 1]: " + std::to_string(confidence));
  }
  auto k = static_cast<std::size_t>(std::floor(confidence * kReliabilityBinCount));
  // confidence * 10 can round across an edge; settle against the edges themselves.
  if (k >= kReliabilityBinCount) k = kReliabilityBinCount - 1;
  if (k > 0 && confidence < bin_edge(k)) --k;
  if (k + 1 < kReliabilityBinCount && confidence >= bin_edge(k + 1)) ++k;
  return k;
}

std::vector<ReliabilityBin> reliability_bins(std::span<const CalibrationRecord> records) {
  std::vector<ReliabilityBin> bins(kReliabilityBinCount);
  std::vector<double> conf_sum(kReliabilityBinCount, 0.0);
  std::vector<std::size_t> hits(kReliabilityBinCount, 0);
  for (std::size_t k = 0; k < kReliabilityBinCount; ++k) {
    bins[k].lower = bin_edge(k);
    bins[k].upper = bin_edge(k + 1);
  }
  for (const auto& r : records) {
    const auto k = reliability_bin_index(r.confidence);
    ++bins[k].count;
    conf_sum[k] += r.confidence;
    hits[k] += r.correct ? 1 : 0;
  }
  for (std::size_t k = 0; k < kReliabilityBinCount; ++k) {
    if (bins[k].count == 0) continue;
    const auto n = static_cast<double>(bins[k].count);
    bins[k].mean_confidence = conf_sum[k] / n;
    bins[k].accuracy = static_cast<double>(hits[k]) / n;
  }
  return bins;
}

double ece(std::span<const CalibrationRecord> records) {
  if (records.empty()) throw std::invalid_argument("ECE of an empty record set");
  const auto n = static_cast<double>(records.size());
  double total = 0.0;
  for (const auto& bin : reliability_bins(records)) {
    if (bin.count == 0) continue;
    total += (static_cast<double>(bin.count) / n) * std::abs(bin.accuracy - bin.mean_confidence);
  }
  return total;
}

std::optional<double> delegation_precision(std::span<const TaskRecord> records) {
  std::size_t delegated = 0;
  std::size_t correct = 0;
  for (const auto& r : records) {
    if (r.decision.mode != RoutingMode::Delegated) continue;
    ++delegated;
    correct += r.outcome.success ? 1 : 0;
  }
  if (delegated == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(delegated);
}

StratifiedAccuracy stratify(std::span<const Outcome> outcomes, std::span<const Task> tasks) {
  std::unordered_map<std::string_view, const Task*> by_id;
  for (const Task& t : tasks) by_id.emplace(t.id, &t);
  std::vector<Labeled> items;
  items.reserve(outcomes.size());
  for (const Outcome& o : outcomes) {
    const auto it = by_id.find(o.task_id);
    if (it == by_id.end()) throw std::invalid_argument("outcome for unknown task '" + o.task_id + "'");
    items.push_back({it->second->difficulty, &it->second->dimensions, o.success});
  }
  return stratify_labeled(items);
}

StratifiedAccuracy stratify(std::span<const TaskRecord> records) {
  std::vector<Labeled> items;
  items.reserve(records.size());
  for (const auto& r : records) {
    if (r.dimensions.empty()) {
      throw std::invalid_argument("record for task '" + r.decision.task_id + "' has no dimensions");
    }
    items.push_back({r.difficulty, &r.dimensions, r.outcome.success});
  }
  return stratify_labeled(items);
}

FlowMatrix delegation_flow(std::span<const TaskRecord> records, std::size_t roster_size) {
  FlowMatrix flow(roster_size, std::vector<std::size_t>(roster_size, 0));
  for (const auto& r : records) {
    const auto& d = r.decision;
    if (d.mode != RoutingMode::Delegated) continue;
    const AgentId to = d.executing_agents.front();
    if (d.original_agent >= roster_size || to >= roster_size) {
      throw std::out_of_range("delegation outside a roster of " + std::to_string(roster_size));
    }
    ++flow[d.original_agent][to];
  }
  return flow;
}

std::vector<CalibrationRecord> calibration_records(std::span<const TaskRecord> records) {
  std::vector<CalibrationRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (const auto c = executor_confidence(r.decision)) out.push_back({*c, r.outcome.success});
  }
  return out;
}

ExperimentReport compute_report(std::span<const TaskRecord> records,
                                const std::vector<std::string>& agent_ids, std::string policy,
                                std::uint64_t seed) {
  ExperimentReport rep;
  rep.policy = std::move(policy);
  rep.seed = seed;
  rep.agent_ids = agent_ids;
  rep.task_count = records.size();

  std::array<std::size_t, kDifficultyCount> tasks_by_diff{};
  std::array<std::size_t, kDifficultyCount> triggered_by_diff{};
  std::array<std::vector<CalibrationRecord>, kDifficultyCount> calib_by_diff;
  for (const auto& r : records) {
    const auto di = static_cast<std::size_t>(r.difficulty);
    rep.correct_count += r.outcome.success ? 1 : 0;
    rep.total_api_calls += r.decision.api_calls;
    ++tasks_by_diff[di];
    switch (r.decision.mode) {
      case RoutingMode::Direct:
        ++rep.direct_count;
        break;
      case RoutingMode::Delegated:
        ++rep.delegated_count;
        ++triggered_by_diff[di];
        break;
      case RoutingMode::Collaborative:
        ++rep.collaborative_count;
        ++triggered_by_diff[di];
        break;
    }
    if (const auto c = executor_confidence(r.decision)) {
      calib_by_diff[di].push_back({*c, r.outcome.success});
    }
  }

  if (rep.task_count > 0) {
    const auto n = static_cast<double>(rep.task_count);
    rep.overall_accuracy = static_cast<double>(rep.correct_count) / n;
    rep.delegation_rate = static_cast<double>(rep.delegated_count + rep.collaborative_count) / n;
  }
  for (std::size_t di = 0; di < kDifficultyCount; ++di) {
    if (tasks_by_diff[di] > 0) {
      rep.delegation_rate_by_difficulty[di] =
          static_cast<double>(triggered_by_diff[di]) / static_cast<double>(tasks_by_diff[di]);
    }
    if (!calib_by_diff[di].empty()) rep.ece_by_difficulty[di] = ece(calib_by_diff[di]);
  }

  rep.stratified = stratify(records);
  rep.delegation_precision = delegation_precision(records);
  const auto calib = calibration_records(records);
  rep.reliability = reliability_bins(calib);
  if (!calib.empty()) rep.ece = ece(calib);
  rep.delegation_flow = delegation_flow(records, agent_ids.size());
  return rep;
}

}  // namespace metacog
