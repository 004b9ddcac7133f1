#include "metacog/orchestrator.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace metacog {

namespace {

constexpr std::uint64_t kAssessStream = 0;
constexpr std::uint64_t kExecuteStream = 1;
constexpr std::uint64_t kRouteStream = 2;
// Agent slot used for streams that belong to the dispatcher, not an agent.
constexpr std::uint64_t kDispatcherSlot = 0xffff'ffffULL;

constexpr std::array<std::string_view, 3> kModeNames{"Direct", "Delegated", "Collaborative"};
constexpr std::array<std::string_view, 6> kPolicyNames{
    "metacog", "single_agent", "round_robin", "random", "skill_fixed", "majority_vote"};

}  // namespace

std::string_view to_string(RoutingMode mode) { return kModeNames[static_cast<std::size_t>(mode)]; }

RoutingMode parse_routing_mode(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == name) return static_cast<RoutingMode>(i);
  }
  throw DomainError("unknown routing mode '" + std::string(name) + "'");
}

std::string_view to_string(Policy policy) { return kPolicyNames[static_cast<std::size_t>(policy)]; }

Policy parse_policy(std::string_view name) {
  for (std::size_t i = 0; i < kPolicyNames.size(); ++i) {
    if (kPolicyNames[i] == name) return static_cast<Policy>(i);
  }
  throw DomainError("unknown policy '" + std::string(name) + "'");
}

AgentId dispatch(std::size_t task_index, std::size_t roster_size) {
  if (roster_size == 0) throw std::invalid_argument("dispatch over an empty roster");
  return task_index % roster_size;
}

std::string weighted_vote(std::span<const std::string> answers, std::span<const double> weights) {
  if (answers.empty() || answers.size() != weights.size()) {
    throw std::invalid_argument("weighted vote needs matching non-empty answers and weights");
  }
  // Candidates in order of first proposal; strict > keeps the earliest on ties.
  std::vector<std::pair<std::string_view, double>> tally;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    auto it = std::find_if(tally.begin(), tally.end(),
                           [&](const auto& entry) { return entry.first == answers[i]; });
    if (it == tally.end()) {
      tally.emplace_back(answers[i], weights[i]);
    } else {
      it->second += weights[i];
    }
  }
  auto best = tally.begin();
  for (auto it = tally.begin() + 1; it != tally.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return std::string(best->first);
}

std::size_t api_call_cost(RoutingMode mode, std::size_t roster_size) {
  switch (mode) {
    case RoutingMode::Direct:
      return 1;
    case RoutingMode::Delegated:
      return 1 + (roster_size - 1) + 1;
    case RoutingMode::Collaborative:
      return 1 + (roster_size - 1) + roster_size;
  }
  throw std::logic_error("unhandled routing mode");
}

std::size_t recorded_call_cost(const RoutingDecision& decision) {
  return (decision.standalone_self_assessment ? 1 : 0) + decision.peer_assessments +
         decision.executing_agents.size();
}

std::optional<double> executor_confidence(const RoutingDecision& decision) {
  if (decision.assessments.empty()) return std::nullopt;
  if (decision.mode == RoutingMode::Collaborative) {
    double best = 0.0;
    for (const auto& [agent, b] : decision.assessments) best = std::max(best, b.fused);
    return best;
  }
  const auto it = decision.assessments.find(decision.executing_agents.front());
  if (it == decision.assessments.end()) return std::nullopt;
  return it->second.fused;
}

Outcome merge_and_feedback(const RoutingDecision& decision, const Task& task,
                           std::vector<CapabilityProfile>& profiles, const MetacogParams& params,
                           bool learning_enabled) {
  if (decision.executing_agents.empty() || decision.answers.size() != decision.executing_agents.size()) {
    throw std::invalid_argument("incomplete routing decision for task '" + task.id + "'");
  }
  Outcome outcome;
  outcome.task_id = task.id;
  outcome.answer = decision.final_answer;
  outcome.success = decision.final_answer == task.ground_truth;
  outcome.executing_agents = decision.executing_agents;

  if (!learning_enabled) return outcome;
  for (const AgentAnswer& entry : decision.answers) {
    if (entry.agent >= profiles.size()) {
      throw std::out_of_range("no profile for agent #" + std::to_string(entry.agent));
    }
    const bool credited = decision.mode == RoutingMode::Collaborative
                              ? entry.answer == task.ground_truth
                              : outcome.success;
    profiles[entry.agent].update(task.dimensions, credited, params.alpha());
  }
  return outcome;
}

Orchestrator::Orchestrator(std::vector<std::unique_ptr<Agent>> agents,
                           std::vector<CapabilityProfile> profiles, MetacogParams params,
                           OrchestratorOptions options)
    : agents_(std::move(agents)),
      profiles_(std::move(profiles)),
      params_(options.ablation.no_verbalized ? params.with_lambda(0.0) : params),
      options_(options) {
  if (agents_.empty()) throw std::invalid_argument("orchestrator needs a non-empty roster");
  if (profiles_.size() != agents_.size()) {
    throw std::invalid_argument("one capability profile per agent is required");
  }
  if (options_.policy != Policy::Metacog && options_.ablation.any()) {
    throw std::invalid_argument("ablation switches only apply to the metacog policy");
  }
}

ConfidenceBreakdown Orchestrator::assess(AgentId agent, const Task& task, std::size_t task_index) {
  if (options_.ablation.no_self_assessment) {
    const double theta = params_.theta();
    return ConfidenceBreakdown{theta, theta, theta, 0.0, theta};
  }
  Rng rng(derive_seed(options_.seed, {task_index, agent, kAssessStream}));
  const double verbalized = agents_[agent]->verbalized_confidence(task, rng);
  return fuse_confidence(verbalized, profile_confidence(profiles_[agent], task.dimensions), params_);
}

ConfidenceBreakdown Orchestrator::rank_by_profile(AgentId agent, const Task& task) const {
  // No verbalized signal is elicited, so both channels carry the profile value.
  const double p = profile_confidence(profiles_[agent], task.dimensions);
  return fuse_confidence(p, p, params_);
}

void Orchestrator::execute_into(RoutingDecision& decision, AgentId agent, const Task& task) {
  Rng rng(derive_seed(options_.seed, {decision.task_index, agent, kExecuteStream}));
  ExecutionResult result = agents_[agent]->execute(task, rng);
  decision.executing_agents.push_back(agent);
  decision.answers.push_back(AgentAnswer{agent, std::move(result.answer)});
}

RoutingDecision Orchestrator::route(const Task& task, std::size_t task_index) {
  RoutingDecision decision = options_.policy == Policy::Metacog ? route_metacog(task, task_index)
                                                                 : route_baseline(task, task_index);
  decision.api_calls = recorded_call_cost(decision);
  return decision;
}

RoutingDecision Orchestrator::route_metacog(const Task& task, std::size_t task_index) {
  const std::size_t n = agents_.size();
  const Ablation& ablation = options_.ablation;

  RoutingDecision d;
  d.task_id = task.id;
  d.task_index = task_index;
  d.original_agent = dispatch(task_index, n);

  const ConfidenceBreakdown self = assess(d.original_agent, task, task_index);
  d.assessments[d.original_agent] = self;

  if (ablation.no_adaptive_delegation || n == 1 || !should_delegate(self)) {
    d.mode = RoutingMode::Direct;
    execute_into(d, d.original_agent, task);
    d.final_answer = d.answers.front().answer;
    return d;
  }

  d.standalone_self_assessment = true;
  // Broadcast. Peers are visited in index order so the argmax tie-break
  // (lowest index) falls out of the strict comparison.
  std::optional<AgentId> best;
  for (AgentId j = 0; j < n; ++j) {
    if (j == d.original_agent) continue;
    ConfidenceBreakdown peer;
    if (ablation.no_cross_agent_eval) {
      peer = rank_by_profile(j, task);
    } else {
      peer = assess(j, task, task_index);
      ++d.peer_assessments;
    }
    d.assessments[j] = peer;
    if (!best || peer.fused > d.assessments[*best].fused) best = j;
  }

  if (d.assessments[*best].fused >= params_.theta()) {
    d.mode = RoutingMode::Delegated;
    execute_into(d, *best, task);
    d.final_answer = d.answers.front().answer;
    return d;
  }

  d.mode = RoutingMode::Collaborative;
  std::vector<std::string> answers;
  std::vector<double> weights;
  for (AgentId j = 0; j < n; ++j) {
    execute_into(d, j, task);
    answers.push_back(d.answers.back().answer);
    weights.push_back(d.assessments.at(j).fused);
  }
  d.final_answer = weighted_vote(answers, weights);
  return d;
}

RoutingDecision Orchestrator::route_baseline(const Task& task, std::size_t task_index) {
  const std::size_t n = agents_.size();
  RoutingDecision d;
  d.task_id = task.id;
  d.task_index = task_index;
  d.original_agent = dispatch(task_index, n);
  d.mode = RoutingMode::Direct;

  switch (options_.policy) {
    case Policy::SingleAgent:
      d.original_agent = 0;
      execute_into(d, 0, task);
      break;
    case Policy::RoundRobin:
      execute_into(d, d.original_agent, task);
      break;
    case Policy::Random: {
      Rng rng(derive_seed(options_.seed, {task_index, kDispatcherSlot, kRouteStream}));
      d.original_agent = rng.index(n);
      execute_into(d, d.original_agent, task);
      break;
    }
    case Policy::SkillFixed: {
      // Route on the task's label: the lowest-index agent specialized in any
      // of its dimensions, else keep the round-robin assignee.
      AgentId target = d.original_agent;
      for (AgentId j = 0; j < n; ++j) {
        const auto skill = agents_[j]->specialization();
        if (!skill) continue;
        const auto& dims = task.dimensions;
        if (std::find(dims.begin(), dims.end(), *skill) != dims.end()) {
          target = j;
          break;
        }
      }
      if (target != d.original_agent) d.mode = RoutingMode::Delegated;
      execute_into(d, target, task);
      break;
    }
    case Policy::MajorityVote: {
      d.mode = RoutingMode::Collaborative;
      std::vector<std::string> answers;
      for (AgentId j = 0; j < n; ++j) {
        execute_into(d, j, task);
        answers.push_back(d.answers.back().answer);
      }
      const std::vector<double> uniform(n, 1.0);
      d.final_answer = weighted_vote(answers, uniform);
      return d;
    }
    case Policy::Metacog:
      throw std::logic_error("metacog policy routed as baseline");
  }
  d.final_answer = d.answers.front().answer;
  return d;
}

Outcome Orchestrator::merge_and_feedback(const RoutingDecision& decision, const Task& task) {
  return metacog::merge_and_feedback(decision, task, profiles_, params_,
                                     !options_.ablation.no_boundary_learning);
}

TaskRecord Orchestrator::process(const Task& task, std::size_t task_index) {
  TaskRecord record;
  record.decision = route(task, task_index);
  record.outcome = merge_and_feedback(record.decision, task);
  record.difficulty = task.difficulty;
  record.dimensions = task.dimensions;
  return record;
}

}  // namespace metacog
