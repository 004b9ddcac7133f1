#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metacog/agents.hpp"
#include "metacog/mcu.hpp"
#include "metacog/profile.hpp"
#include "metacog/types.hpp"

namespace metacog {

enum class RoutingMode { Direct, Delegated, Collaborative };

enum class Policy { Metacog, SingleAgent, RoundRobin, Random, SkillFixed, MajorityVote };

std::string_view to_string(RoutingMode mode);
RoutingMode parse_routing_mode(std::string_view name);
std::string_view to_string(Policy policy);
Policy parse_policy(std::string_view name);

// Component switches for the ablation variants. All false is the full system.
struct Ablation {
  bool no_self_assessment = false;      // every c_i is the constant theta
  bool no_adaptive_delegation = false;  // always execute the assigned task
  bool no_boundary_learning = false;    // profiles never update
  bool no_cross_agent_eval = false;     // peers ranked by stored profile only
  bool no_verbalized = false;           // lambda forced to 0

  bool any() const {
    return no_self_assessment || no_adaptive_delegation || no_boundary_learning ||
           no_cross_agent_eval || no_verbalized;
  }
  friend bool operator==(const Ablation&, const Ablation&) = default;
};

struct AgentAnswer {
  AgentId agent = 0;
  std::string answer;
};

struct RoutingDecision {
  std::string task_id;
  std::size_t task_index = 0;
  RoutingMode mode = RoutingMode::Direct;
  AgentId original_agent = 0;
  std::vector<AgentId> executing_agents;  // ascending
  std::map<AgentId, ConfidenceBreakdown> assessments;
  std::vector<AgentAnswer> answers;  // one per executing agent, same order
  std::string final_answer;
  // Call ledger inputs. A self-assessment that precedes a direct execution
  // rides on the execution call; otherwise it is billed on its own.
  bool standalone_self_assessment = false;
  std::size_t peer_assessments = 0;
  std::size_t api_calls = 0;
};

struct TaskRecord {
  RoutingDecision decision;
  Outcome outcome;
  Difficulty difficulty = Difficulty::Easy;
  std::vector<Dimension> dimensions;
};

// Round-robin assignee for the task at `task_index`.
AgentId dispatch(std::size_t task_index, std::size_t roster_size);

// Confidence-weighted plurality over per-agent answers (index i is agent i).
// Ties go to the answer whose earliest proposer has the lowest index.
std::string weighted_vote(std::span<const std::string> answers, std::span<const double> weights);

// Closed-form cost of a full-protocol decision with N agents:
// Direct 1, Delegated N + 1, Collaborative 2N.
std::size_t api_call_cost(RoutingMode mode, std::size_t roster_size);

// Cost recomputed from what a decision actually recorded: standalone
// self-assessment, peer assessments and one call per executing agent.
std::size_t recorded_call_cost(const RoutingDecision& decision);

// Confidence charted against correctness: the executor's fused confidence,
// or the largest participant confidence in Collaborative mode. Empty for
// policies that never assess.
std::optional<double> executor_confidence(const RoutingDecision& decision);

// Scores the final answer and applies the EMA update to whoever executed.
// In Collaborative mode each participant is credited with its own answer.
Outcome merge_and_feedback(const RoutingDecision& decision, const Task& task,
                           std::vector<CapabilityProfile>& profiles, const MetacogParams& params,
                           bool learning_enabled = true);

struct OrchestratorOptions {
  Policy policy = Policy::Metacog;
  Ablation ablation;
  std::uint64_t seed = 0;
};

// Owns the roster and profiles for one run and processes tasks in order.
class Orchestrator {
 public:
  Orchestrator(std::vector<std::unique_ptr<Agent>> agents, std::vector<CapabilityProfile> profiles,
               MetacogParams params, OrchestratorOptions options = {});

  RoutingDecision route(const Task& task, std::size_t task_index);
  Outcome merge_and_feedback(const RoutingDecision& decision, const Task& task);
  TaskRecord process(const Task& task, std::size_t task_index);

  std::size_t roster_size() const { return agents_.size(); }
  const std::vector<CapabilityProfile>& profiles() const { return profiles_; }
  const MetacogParams& params() const { return params_; }

 private:
  ConfidenceBreakdown assess(AgentId agent, const Task& task, std::size_t task_index);
  ConfidenceBreakdown rank_by_profile(AgentId agent, const Task& task) const;
  void execute_into(RoutingDecision& decision, AgentId agent, const Task& task);

  RoutingDecision route_metacog(const Task& task, std::size_t task_index);
  RoutingDecision route_baseline(const Task& task, std::size_t task_index);

  std::vector<std::unique_ptr<Agent>> agents_;
  std::vector<CapabilityProfile> profiles_;
  MetacogParams params_;
  OrchestratorOptions options_;
};

}  // namespace metacog
