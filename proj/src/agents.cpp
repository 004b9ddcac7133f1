#include "metacog/agents.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace metacog {

using nlohmann::json;

double AgentSpec::competence(const Task& task) const {
  if (task.dimensions.empty()) throw DomainError("task '" + task.id + "' has no dimensions");
  const auto col = static_cast<std::size_t>(task.difficulty);
  double sum = 0.0;
  for (Dimension d : task.dimensions) sum += true_competence[dimension_index(d)][col];
  return sum / static_cast<double>(task.dimensions.size());
}

void validate_agent_spec(const AgentSpec& spec) {
  if (spec.id.empty()) throw std::invalid_argument("agent with empty id");
  dimension_index(spec.specialization);
  for (const auto& row : spec.true_competence) {
    for (double q : row) {
      if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("agent '" + spec.id + "': competence outside [0, 1]");
      }
    }
  }
  if (!std::isfinite(spec.verbalization_bias)) {
    throw std::invalid_argument("agent '" + spec.id + "': non-finite bias");
  }
  if (!(spec.verbalization_noise >= 0.0) || !std::isfinite(spec.verbalization_noise)) {
    throw std::invalid_argument("agent '" + spec.id + "': noise must be >= 0");
  }
}

void validate_roster(const std::vector<AgentSpec>& roster) {
  if (roster.empty()) throw std::invalid_argument("roster is empty");
  std::set<std::string> seen;
  for (const auto& spec : roster) {
    validate_agent_spec(spec);
    if (!seen.insert(spec.id).second) {
      throw std::invalid_argument("duplicate agent id '" + spec.id + "'");
    }
  }
}

double verbalized_confidence(const AgentSpec& agent, const Task& task, Rng& rng) {
  const double q = agent.competence(task);
  double noise = 0.0;
  // No draw when noise is off so the stream stays untouched.
  if (agent.verbalization_noise > 0.0) noise = agent.verbalization_noise * rng.normal();
  return std::clamp(q + agent.verbalization_bias + noise, 0.0, 1.0);
}

ExecutionResult execute(const AgentSpec& agent, const Task& task, Rng& rng) {
  ExecutionResult result;
  if (rng.bernoulli(agent.competence(task))) {
    result.answer = task.ground_truth;
    result.correct = true;
  } else {
    if (task.distractors.empty()) throw DomainError("task '" + task.id + "' has no distractors");
    result.answer = task.distractors[rng.index(task.distractors.size())];
    result.correct = false;
  }
  return result;
}

SimulatedAgent::SimulatedAgent(AgentSpec spec) : spec_(std::move(spec)) {
  validate_agent_spec(spec_);
}

double SimulatedAgent::verbalized_confidence(const Task& task, Rng& rng) {
  return metacog::verbalized_confidence(spec_, task, rng);
}

ExecutionResult SimulatedAgent::execute(const Task& task, Rng& rng) {
  return metacog::execute(spec_, task, rng);
}

std::string format_request(const Task& task, RequestMode mode) {
  json req = json::object();
  req["task_id"] = task.id;
  req["prompt_text"] = task.prompt;
  req["mode"] = mode == RequestMode::Assess ? "assess" : "execute";
  return req.dump();
}

namespace {

json parse_object(std::string_view line) {
  json doc = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ProtocolError("response is not a JSON object: " + std::string(line));
  }
  return doc;
}

}  // namespace

double parse_assess_response(std::string_view line) {
  const json doc = parse_object(line);
  const auto it = doc.find("confidence");
  if (it == doc.end() || !it->is_number()) {
    throw ProtocolError("assess response lacks a numeric 'confidence'");
  }
  const double raw = it->get<double>();
  if (!(raw >= 0.0 && raw <= 100.0)) {
    throw ProtocolError("confidence outside [0, 100]: " + std::to_string(raw));
  }
  return raw / 100.0;
}

std::string parse_execute_response(std::string_view line) {
  const json doc = parse_object(line);
  const auto it = doc.find("answer");
  if (it == doc.end() || !it->is_string()) {
    throw ProtocolError("execute response lacks a string 'answer'");
  }
  return it->get<std::string>();
}

RemoteAgent::RemoteAgent(std::string id, Transport transport)
    : id_(std::move(id)), transport_(std::move(transport)) {
  if (!transport_) throw std::invalid_argument("remote agent '" + id_ + "' has no transport");
}

double RemoteAgent::verbalized_confidence(const Task& task, Rng& /*rng*/) {
  return parse_assess_response(transport_(format_request(task, RequestMode::Assess)));
}

ExecutionResult RemoteAgent::execute(const Task& task, Rng& /*rng*/) {
  ExecutionResult result;
  result.answer = parse_execute_response(transport_(format_request(task, RequestMode::Execute)));
  result.correct = result.answer == task.ground_truth;
  return result;
}

std::vector<AgentSpec> make_roster(const RosterShape& shape) {
  static constexpr std::array<const char*, 3> kIds{"alpha", "beta", "gamma"};
  static constexpr std::array<const char*, 3> kNames{"Agent-alpha", "Agent-beta", "Agent-gamma"};

  std::vector<AgentSpec> roster;
  roster.reserve(shape.agents);
  for (std::size_t i = 0; i < shape.agents; ++i) {
    AgentSpec spec;
    if (i < kIds.size()) {
      spec.id = kIds[i];
      spec.name = kNames[i];
    } else {
      spec.id = "agent" + std::to_string(i);
      spec.name = "Agent-" + std::to_string(i);
    }
    spec.specialization = kAllDimensions[i % kDimensionCount];
    for (Dimension d : kAllDimensions) {
      const double top = d == spec.specialization ? shape.specialty_competence
                                                  : shape.base_competence;
      auto& row = spec.true_competence[dimension_index(d)];
      for (std::size_t tier = 0; tier < kTierCount; ++tier) {
        row[tier] = std::clamp(top - shape.difficulty_step * static_cast<double>(tier), 0.0, 1.0);
      }
      row[static_cast<std::size_t>(Difficulty::Cross)] =
          row[static_cast<std::size_t>(Difficulty::Hard)];
    }
    spec.verbalization_bias = shape.verbalization_bias;
    spec.verbalization_noise = shape.verbalization_noise;
    roster.push_back(std::move(spec));
  }
  validate_roster(roster);
  return roster;
}

std::vector<std::unique_ptr<Agent>> make_simulated_agents(const std::vector<AgentSpec>& roster) {
  std::vector<std::unique_ptr<Agent>> agents;
  agents.reserve(roster.size());
  for (const auto& spec : roster) agents.push_back(std::make_unique<SimulatedAgent>(spec));
  return agents;
}

}  // namespace metacog
