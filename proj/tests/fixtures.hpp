#pragma once

#include <string>
#include <vector>

#include "metacog/agents.hpp"
#include "metacog/types.hpp"

namespace fixtures {

inline metacog::Task make_task(std::string id, std::vector<metacog::Dimension> dims,
                               metacog::Difficulty difficulty = metacog::Difficulty::Easy) {
  metacog::Task t;
  t.id = std::move(id);
  t.prompt = "prompt for " + t.id;
  t.dimensions = std::move(dims);
  t.difficulty = difficulty;
  t.ground_truth = "A";
  t.distractors = {"B", "C", "D"};
  return t;
}

// Every table entry set to q.
inline metacog::AgentSpec flat_agent(std::string id, double q, double bias = 0.0,
                                     double noise = 0.0) {
  metacog::AgentSpec s;
  s.id = id;
  s.name = "Agent-" + id;
  for (auto& row : s.true_competence) row.fill(q);
  s.verbalization_bias = bias;
  s.verbalization_noise = noise;
  return s;
}

}  // namespace fixtures
