#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metacog/rng.hpp"
#include "metacog/types.hpp"

namespace metacog {

// Success probability indexed by [dimension][difficulty], Cross included.
using CompetenceTable = std::array<std::array<double, kDifficultyCount>, kDimensionCount>;

struct AgentSpec {
  std::string id;
  std::string name;
  Dimension specialization = Dimension::LR;
  CompetenceTable true_competence{};
  double verbalization_bias = 0.0;
  double verbalization_noise = 0.0;

  // True success probability on a task: mean of the table entries for the
  // task's dimensions at its difficulty.
  double competence(const Task& task) const;
};

void validate_agent_spec(const AgentSpec& spec);
// Non-empty, each spec valid, ids unique.
void validate_roster(const std::vector<AgentSpec>& roster);

struct ExecutionResult {
  std::string answer;
  bool correct = false;  // filled from ground truth; never consulted by routing
  int calls_consumed = 1;
};

// Self-report of a simulated agent: clamp(q + bias + noise * z, 0, 1).
double verbalized_confidence(const AgentSpec& agent, const Task& task, Rng& rng);

// Bernoulli(q) draw: the ground truth on success, otherwise a uniformly chosen
// distractor.
ExecutionResult execute(const AgentSpec& agent, const Task& task, Rng& rng);

// What the orchestrator talks to. Implementations must be deterministic for a
// given Rng state.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual const std::string& id() const = 0;
  virtual double verbalized_confidence(const Task& task, Rng& rng) = 0;
  virtual ExecutionResult execute(const Task& task, Rng& rng) = 0;
  // Declared skill, used by label-based routing baselines.
  virtual std::optional<Dimension> specialization() const { return std::nullopt; }
};

class SimulatedAgent final : public Agent {
 public:
  explicit SimulatedAgent(AgentSpec spec);

  const std::string& id() const override { return spec_.id; }
  const AgentSpec& spec() const { return spec_; }
  double verbalized_confidence(const Task& task, Rng& rng) override;
  ExecutionResult execute(const Task& task, Rng& rng) override;
  std::optional<Dimension> specialization() const override { return spec_.specialization; }

 private:
  AgentSpec spec_;
};

// Remote backend wire contract. Requests and responses are single-line JSON
// objects:
//   request  {"task_id": str, "prompt_text": str, "mode": "assess"|"execute"}
//   assess   {"confidence": number in [0, 100]}
//   execute  {"answer": str}
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RequestMode { Assess, Execute };

std::string format_request(const Task& task, RequestMode mode);
// Returns the confidence normalized to [0, 1].
double parse_assess_response(std::string_view line);
std::string parse_execute_response(std::string_view line);

class RemoteAgent final : public Agent {
 public:
  // Sends one request line, returns one response line.
  using Transport = std::function<std::string(const std::string&)>;

  RemoteAgent(std::string id, Transport transport);

  const std::string& id() const override { return id_; }
  double verbalized_confidence(const Task& task, Rng& rng) override;
  ExecutionResult execute(const Task& task, Rng& rng) override;

 private:
  std::string id_;
  Transport transport_;
};

// Shape of the built-in simulated roster. Each agent is strong on its
// specialization and moderate elsewhere; competence falls by `difficulty_step`
// per tier and cross-domain tasks use the Hard tier of each involved
// dimension.
struct RosterShape {
  std::size_t agents = 3;
  double specialty_competence = 0.9;
  double base_competence = 0.62;
  double difficulty_step = 0.1;
  double verbalization_bias = 0.0;
  double verbalization_noise = 0.05;
};

std::vector<AgentSpec> make_roster(const RosterShape& shape = {});

std::vector<std::unique_ptr<Agent>> make_simulated_agents(const std::vector<AgentSpec>& roster);

}  // namespace metacog
