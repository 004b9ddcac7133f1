// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances and time limits are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "metacog/agents.hpp"
#include "metacog/benchgen.hpp"
#include "metacog/config.hpp"
#include "metacog/harness.hpp"
#include "metacog/mcu.hpp"
#include "metacog/metrics.hpp"
#include "metacog/orchestrator.hpp"
#include "metacog/profile.hpp"
#include "metacog/rng.hpp"
#include "metacog/serialization.hpp"

using namespace metacog;

namespace {

constexpr double kFuseTolerance = 1e-12;
constexpr double kEceOracleTolerance = 1e-12;
constexpr double kEmaTolerance = 0.05;
constexpr double kStepFraction = 0.95;
constexpr int kStepBudget = 30;
constexpr double kCalibratedEceLimit = 0.05;
constexpr double kIncreasingShare = 0.8;
constexpr int kPatternSeeds = 20;
constexpr int kCalibrationSeeds = 20;
constexpr double kBenchLimitSec = 1.0;
constexpr double kEmaLimitSec = 5.0;
constexpr double kPatternLimitSec = 120.0;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

class FixedAgent final : public Agent {
 public:
  FixedAgent(std::string id, double c, std::string answer)
      : id_(std::move(id)), c_(c), answer_(std::move(answer)) {}
  const std::string& id() const override { return id_; }
  double verbalized_confidence(const Task&, Rng&) override { return c_; }
  ExecutionResult execute(const Task& t, Rng&) override { return {answer_, answer_ == t.ground_truth, 1}; }

 private:
  std::string id_;
  double c_;
  std::string answer_;
};

Task lr_task() {
  Task t;
  t.id = "LR-Hard-001";
  t.prompt = "trace";
  t.dimensions = {Dimension::LR};
  t.difficulty = Difficulty::Hard;
  t.ground_truth = "A";
  t.distractors = {"B", "C", "D"};
  return t;
}

Verdict c1_benchmark() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = default_benchmark_spec(1);
  const auto tasks = generate(spec);
  const auto diff = validate(tasks, spec);
  const std::array<std::array<std::size_t, 3>, 5> table{{
      {42, 38, 40}, {38, 42, 40}, {40, 38, 42}, {41, 40, 39}, {39, 42, 39}}};
  const bool layout = spec.per_cell_counts == table && spec.cross_domain_count == 100;
  const double secs = seconds_since(t0);
  return {tasks.size() == 700 && diff.empty() && layout && secs < kBenchLimitSec,
          fmt("tasks=%.0f diff_cells=%.0f time=%.3fs", double(tasks.size()), double(diff.size()), secs)};
}

Verdict c2_fusion() {
  const auto b = fuse_confidence(0.45, 0.27, MetacogParams{});
  const bool value = std::abs(b.fused - 0.378) <= kFuseTolerance &&
                     std::round(b.fused * 100) / 100 == 0.38;

  const Task task = lr_task();
  std::vector<std::unique_ptr<Agent>> agents;
  agents.push_back(std::make_unique<FixedAgent>("alpha", 0.72, "A"));
  agents.push_back(std::make_unique<FixedAgent>("beta", 0.21, "B"));
  agents.push_back(std::make_unique<FixedAgent>("gamma", 0.45, "C"));
  std::vector<CapabilityProfile> profiles(3);
  profiles[0].set(Dimension::LR, 0.72);
  profiles[1].set(Dimension::LR, 0.21);
  profiles[2].set(Dimension::LR, 0.27);
  Orchestrator o(std::move(agents), profiles, MetacogParams{});
  const auto d = o.route(task, 2);
  const bool trace = d.original_agent == 2 && std::abs(d.assessments.at(2).fused - 0.378) <= kFuseTolerance &&
                     std::abs(d.assessments.at(0).fused - 0.72) <= kFuseTolerance &&
                     std::abs(d.assessments.at(1).fused - 0.21) <= kFuseTolerance &&
                     d.mode == RoutingMode::Delegated && d.executing_agents == std::vector<AgentId>{0};
  return {value && trace, fmt("fused=%.15f trace_ok=%.0f", b.fused, trace)};
}

Verdict c3_boundary() {
  const MetacogParams params;
  int mismatches = 0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double v = i / 100.0, p = j / 100.0;
      const double c = 0.6 * v + 0.4 * p;
      const double delta = std::abs(v - p);
      const double bar = 0.5 + (delta > 0.3 ? 0.2 * delta : 0.0);
      if (should_delegate(fuse_confidence(v, p, params)) != (c < bar)) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("grid=101x101 mismatches=%.0f", mismatches)};
}

Verdict c4_ema() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::array<Dimension, 1> dims{Dimension::LR};
  double worst = 0.0;
  for (double q : {0.2, 0.5, 0.8}) {
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng(derive_seed(seed, {0xe3a}));
      CapabilityProfile p;
      for (int t = 0; t < 200; ++t) p.update(dims, rng.bernoulli(q), 0.1);
      sum += p.at(Dimension::LR);
    }
    worst = std::max(worst, std::abs(sum / 100 - q));
  }
  // A 0.4 step: estimate at 0.6, every outcome a success.
  CapabilityProfile step;
  step.set(Dimension::LR, 0.6);
  int updates = 0;
  while (step.at(Dimension::LR) - 0.6 < kStepFraction * 0.4 && updates < 1000) {
    step.update(dims, true, 0.1);
    ++updates;
  }
  const double secs = seconds_since(t0);
  return {worst <= kEmaTolerance && updates <= kStepBudget && secs < kEmaLimitSec,
          fmt("max_mean_error=%.4f step_updates=%.0f time=%.3fs", worst, updates, secs)};
}

double ece_oracle(const std::vector<CalibrationRecord>& rs) {
  std::vector<double> gap(10, 0.0);
  for (const auto& r : rs) {
    std::size_t bin = 9;
    for (std::size_t k = 0; k < 9; ++k) {
      if (r.confidence < static_cast<double>(k + 1) / 10) {
        bin = k;
        break;
      }
    }
    gap[bin] += (r.correct ? 1.0 : 0.0) - r.confidence;
  }
  double total = 0.0;
  for (double g : gap) total += std::abs(g);
  return total / static_cast<double>(rs.size());
}

Verdict c5_ece() {
  Rng rng(5);
  double worst = 0.0;
  for (int set = 0; set < 1000; ++set) {
    std::vector<CalibrationRecord> rs(1 + rng.index(300));
    for (auto& r : rs) {
      r.confidence = rng.bernoulli(0.2) ? static_cast<double>(rng.index(11)) / 10 : rng.uniform();
      r.correct = rng.bernoulli(r.confidence);
    }
    worst = std::max(worst, std::abs(ece(rs) - ece_oracle(rs)));
  }
  std::vector<CalibrationRecord> two;
  for (int i = 0; i < 6; ++i) two.push_back({0.25, i == 0});
  for (int i = 0; i < 4; ++i) two.push_back({0.85, true});
  const double hand = ece(two);
  return {worst <= kEceOracleTolerance && std::abs(hand - 0.11) <= kEceOracleTolerance,
          fmt("sets=1000 max_diff=%.2e two_bin=%.15f", worst, hand)};
}

Verdict c6_vote() {
  Rng rng(6);
  const std::vector<std::string> alphabet{"A", "B", "C", "D", "E"};
  int mismatches = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    std::vector<std::string> answers(n);
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
      answers[i] = alphabet[rng.index(alphabet.size())];
      weights[i] = rng.bernoulli(0.5) ? static_cast<double>(rng.index(4)) / 4 : rng.uniform();
    }
    std::string expected;
    double best = -1.0;
    for (const auto& cand : answers) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += answers[i] == cand ? weights[i] : 0.0;
      if (s > best) {
        best = s;
        expected = cand;
      }
    }
    if (weighted_vote(answers, weights) != expected) ++mismatches;
  }
  const std::vector<std::string> a{"A", "B", "B"};
  const std::vector<double> w{0.9, 0.3, 0.7};
  const std::string example = weighted_vote(a, w);
  return {mismatches == 0 && example == "B",
          "instances=10000 mismatches=" + std::to_string(mismatches) + " example=" + example};
}

TaskRecord forced(RoutingMode mode, std::size_t n) {
  TaskRecord r;
  r.difficulty = Difficulty::Medium;
  r.dimensions = {Dimension::LR};
  auto& d = r.decision;
  d.task_id = "forced";
  d.mode = mode;
  d.original_agent = 0;
  if (mode == RoutingMode::Direct) {
    d.executing_agents = {0};
  } else {
    d.standalone_self_assessment = true;
    d.peer_assessments = n - 1;
    if (mode == RoutingMode::Delegated) {
      d.executing_agents = {1};
    } else {
      for (AgentId j = 0; j < n; ++j) d.executing_agents.push_back(j);
    }
  }
  d.api_calls = recorded_call_cost(d);
  return r;
}

Verdict c7_calls() {
  std::vector<TaskRecord> log;
  for (int i = 0; i < 482; ++i) log.push_back(forced(RoutingMode::Direct, 3));
  for (int i = 0; i < 204; ++i) log.push_back(forced(RoutingMode::Delegated, 3));
  for (int i = 0; i < 14; ++i) log.push_back(forced(RoutingMode::Collaborative, 3));
  const auto total = compute_report(log, {"alpha", "beta", "gamma"}, "metacog", 0).total_api_calls;
  const auto rr = run_single(build_config({{"policy", "round_robin"}}), 1).report.total_api_calls;
  const auto mv = run_single(build_config({{"policy", "majority_vote"}}), 1).report.total_api_calls;
  return {total == 1382 && rr == 700 && mv == 2100,
          fmt("forced_log=%.0f round_robin=%.0f majority_vote=%.0f", double(total), double(rr), double(mv))};
}

Verdict c8_patterns() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto base = build_config({});
  auto rr = build_config({{"policy", "round_robin"}});
  auto no_sa = build_config({{"ablation.no_self_assessment", "true"}});
  auto no_ad = build_config({{"ablation.no_adaptive_delegation", "true"}});
  int increasing = 0, beat_sa = 0, beat_ad = 0;
  double acc = 0.0, rr_acc = 0.0;
  for (std::uint64_t seed = 1; seed <= kPatternSeeds; ++seed) {
    const auto rep = run_single(base, seed).report;
    const auto& by = rep.delegation_rate_by_difficulty;
    if (*by[0] < *by[1] && *by[1] < *by[2]) ++increasing;
    acc += rep.overall_accuracy;
    rr_acc += run_single(rr, seed).report.overall_accuracy;
    beat_sa += rep.overall_accuracy > run_single(no_sa, seed).report.overall_accuracy;
    beat_ad += rep.overall_accuracy > run_single(no_ad, seed).report.overall_accuracy;
  }
  const double secs = seconds_since(t0);
  const bool a = increasing >= kIncreasingShare * kPatternSeeds;
  const bool b = acc > rr_acc;
  const bool c = 2 * beat_sa > kPatternSeeds && 2 * beat_ad > kPatternSeeds;
  return {a && b && c && secs < kPatternLimitSec,
          fmt("increasing=%.0f/20 metacog=%.4f round_robin=%.4f", increasing, acc / kPatternSeeds,
              rr_acc / kPatternSeeds) +
              fmt(" beats_no_self_assessment=%.0f/20 beats_no_adaptive_delegation=%.0f/20 time=%.1fs",
                  beat_sa, beat_ad, secs)};
}

Verdict c9_determinism() {
  const auto cfg = build_config({});
  const auto a = run_single(cfg, 42);
  const auto b = run_single(cfg, 42);
  const bool logs = dump_decision_log(a.records) == dump_decision_log(b.records);
  const bool reports = dump_report(a.report) == dump_report(b.report);
  return {logs && reports, std::string("log_identical=") + (logs ? "yes" : "no") +
                               " report_identical=" + (reports ? "yes" : "no")};
}

Verdict c10_calibration() {
  const auto calibrated = build_config({{"roster.noise", "0"}, {"roster.bias", "0"}});
  const auto biased = build_config({{"roster.noise", "0"}, {"roster.bias", "0.2"}});
  double worst = 0.0;
  int ordered = 0;
  for (std::uint64_t seed = 1; seed <= kCalibrationSeeds; ++seed) {
    const double e0 = *run_single(calibrated, seed).report.ece;
    const double e1 = *run_single(biased, seed).report.ece;
    worst = std::max(worst, e0);
    ordered += e1 > e0;
  }
  return {worst <= kCalibratedEceLimit && ordered == kCalibrationSeeds,
          fmt("seeds=%.0f max_unbiased_ece=%.4f biased_above_unbiased=%.0f/%.0f", kCalibrationSeeds, worst,
              ordered, kCalibrationSeeds)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"1 benchmark structure", c1_benchmark},
      {"2 confidence fusion regression", c2_fusion},
      {"3 decision boundary grid", c3_boundary},
      {"4 EMA convergence", c4_ema},
      {"5 ECE oracle", c5_ece},
      {"6 weighted vote oracle", c6_vote},
      {"7 API-call ledger", c7_calls},
      {"8 qualitative patterns", c8_patterns},
      {"9 determinism", c9_determinism},
      {"10 calibration knob", c10_calibration},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %-32s %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
