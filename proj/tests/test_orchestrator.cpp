#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "metacog/benchgen.hpp"
#include "metacog/orchestrator.hpp"
#include "metacog/rng.hpp"

using namespace metacog;
using fixtures::make_task;

namespace {

// Fixed self-report and fixed answer, no randomness.
class StubAgent final : public Agent {
 public:
  StubAgent(std::string id, double confidence, std::string answer)
      : id_(std::move(id)), confidence_(confidence), answer_(std::move(answer)) {}
  const std::string& id() const override { return id_; }
  double verbalized_confidence(const Task&, Rng&) override {
    ++assess_calls;
    return confidence_;
  }
  ExecutionResult execute(const Task& task, Rng&) override {
    ++execute_calls;
    return {answer_, answer_ == task.ground_truth, 1};
  }
  int assess_calls = 0;
  int execute_calls = 0;

 private:
  std::string id_;
  double confidence_;
  std::string answer_;
};

struct StubSetup {
  double verbalized;
  double profile;
  std::string answer;
};

Orchestrator make_stub_orchestrator(const std::vector<StubSetup>& setup, const Task& task,
                                    OrchestratorOptions options = {}) {
  std::vector<std::unique_ptr<Agent>> agents;
  std::vector<CapabilityProfile> profiles;
  for (std::size_t i = 0; i < setup.size(); ++i) {
    agents.push_back(
        std::make_unique<StubAgent>("s" + std::to_string(i), setup[i].verbalized, setup[i].answer));
    CapabilityProfile p;
    for (auto d : task.dimensions) p.set(d, setup[i].profile);
    profiles.push_back(p);
  }
  return Orchestrator(std::move(agents), std::move(profiles), MetacogParams{}, options);
}

Orchestrator make_sim_orchestrator(OrchestratorOptions options, RosterShape shape = {}) {
  const auto roster = make_roster(shape);
  return Orchestrator(make_simulated_agents(roster),
                      std::vector<CapabilityProfile>(roster.size(), init_profile()), MetacogParams{},
                      options);
}

std::vector<TaskRecord> run_all(Orchestrator& o, const std::vector<Task>& tasks) {
  std::vector<TaskRecord> out;
  for (std::size_t k = 0; k < tasks.size(); ++k) out.push_back(o.process(tasks[k], k));
  return out;
}

}  // namespace

TEST_CASE("dispatch is index mod N") {
  CHECK(dispatch(0, 3) == 0);
  CHECK(dispatch(3, 3) == 0);
  CHECK(dispatch(7, 3) == 1);
  CHECK_THROWS_AS(dispatch(1, 0), std::invalid_argument);
}

TEST_CASE("worked delegation trace") {
  // Task 2 lands on the third agent, whose 0.45 self-report against a 0.27
  // profile fuses to 0.378. Peers score 0.72 and 0.21.
  const auto task = make_task("LR-Hard-007", {Dimension::LR}, Difficulty::Hard);
  auto o = make_stub_orchestrator({{0.72, 0.72, "A"}, {0.21, 0.21, "B"}, {0.45, 0.27, "C"}}, task);
  const auto d = o.route(task, 2);
  CHECK(d.original_agent == 2);
  CHECK(d.assessments.at(2).fused == doctest::Approx(0.378).epsilon(1e-12));
  CHECK(d.assessments.at(2).conflict == doctest::Approx(0.18));
  CHECK(d.assessments.at(0).fused == doctest::Approx(0.72));
  CHECK(d.assessments.at(1).fused == doctest::Approx(0.21));
  CHECK(d.mode == RoutingMode::Delegated);
  CHECK(d.executing_agents == std::vector<AgentId>{0});
  CHECK(d.final_answer == "A");
  CHECK(d.api_calls == 4);

  const auto outcome = o.merge_and_feedback(d, task);
  CHECK(outcome.success);
  CHECK(o.profiles()[0].at(Dimension::LR) == doctest::Approx(0.748));
  CHECK(o.profiles()[2].at(Dimension::LR) == doctest::Approx(0.27));
}

TEST_CASE("confident assignee executes directly for one call") {
  const auto task = make_task("t", {Dimension::KR});
  auto o = make_stub_orchestrator({{0.9, 0.8, "A"}, {0.1, 0.1, "B"}, {0.1, 0.1, "C"}}, task);
  const auto d = o.route(task, 0);
  CHECK(d.mode == RoutingMode::Direct);
  CHECK(d.executing_agents == std::vector<AgentId>{0});
  CHECK(d.api_calls == 1);
  CHECK(d.assessments.size() == 1);
}

TEST_CASE("nobody confident falls back to a weighted vote") {
  const auto task = make_task("t", {Dimension::CG});
  auto o = make_stub_orchestrator({{0.4, 0.4, "B"}, {0.3, 0.3, "A"}, {0.2, 0.2, "A"}}, task);
  const auto d = o.route(task, 0);
  CHECK(d.mode == RoutingMode::Collaborative);
  CHECK(d.executing_agents == std::vector<AgentId>{0, 1, 2});
  CHECK(d.final_answer == "A");
  CHECK(d.api_calls == 6);
}

TEST_CASE("peer ties go to the lowest index") {
  const auto task = make_task("t", {Dimension::MC});
  auto o = make_stub_orchestrator(
      {{0.1, 0.1, "B"}, {0.8, 0.8, "A"}, {0.8, 0.8, "C"}, {0.8, 0.8, "D"}}, task);
  const auto d = o.route(task, 0);
  CHECK(d.mode == RoutingMode::Delegated);
  CHECK(d.executing_agents == std::vector<AgentId>{1});
  CHECK(d.api_calls == 5);
}

TEST_CASE("weighted vote examples") {
  const std::vector<std::string> a{"A", "B", "B"};
  const std::vector<double> w{0.9, 0.3, 0.7};
  CHECK(weighted_vote(a, w) == "B");
  const std::vector<std::string> tie{"A", "B"};
  const std::vector<double> even{0.5, 0.5};
  CHECK(weighted_vote(tie, even) == "A");
  CHECK_THROWS_AS(weighted_vote(std::vector<std::string>{}, std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("weighted vote matches brute-force enumeration") {
  Rng rng(2024);
  const std::vector<std::string> alphabet{"A", "B", "C", "D"};
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    std::vector<std::string> answers;
    std::vector<double> weights;
    for (std::size_t i = 0; i < n; ++i) {
      answers.push_back(alphabet[rng.index(alphabet.size())]);
      // Coarse weights make exact ties common.
      weights.push_back(static_cast<double>(rng.index(5)) / 4.0);
    }
    std::string expected;
    double best = -1.0;
    for (const auto& candidate : answers) {
      double score = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (answers[i] == candidate) score += weights[i];
      }
      if (score > best) {
        best = score;
        expected = candidate;
      }
    }
    REQUIRE(weighted_vote(answers, weights) == expected);
  }
}

TEST_CASE("merge credits the executor") {
  const auto task = make_task("t", {Dimension::LR});
  std::vector<CapabilityProfile> profiles(3);
  profiles[1].set(Dimension::LR, 0.27);
  RoutingDecision d;
  d.mode = RoutingMode::Delegated;
  d.original_agent = 2;
  d.executing_agents = {1};
  d.answers = {{1, "A"}};
  d.final_answer = "A";
  const auto out = merge_and_feedback(d, task, profiles, MetacogParams{});
  CHECK(out.reward() == 1);
  CHECK(profiles[1].at(Dimension::LR) == doctest::Approx(0.343));
  CHECK(profiles[2].at(Dimension::LR) == 0.5);

  std::vector<CapabilityProfile> frozen(3);
  merge_and_feedback(d, task, frozen, MetacogParams{}, false);
  CHECK(frozen == std::vector<CapabilityProfile>(3));
}

TEST_CASE("collaborative merge credits each participant's own answer") {
  const auto task = make_task("t", {Dimension::CI});
  std::vector<CapabilityProfile> profiles(3);
  RoutingDecision d;
  d.mode = RoutingMode::Collaborative;
  d.executing_agents = {0, 1, 2};
  d.answers = {{0, "A"}, {1, "B"}, {2, "A"}};
  d.final_answer = "A";
  merge_and_feedback(d, task, profiles, MetacogParams{});
  CHECK(profiles[0].at(Dimension::CI) == doctest::Approx(0.55));
  CHECK(profiles[1].at(Dimension::CI) == doctest::Approx(0.45));
  CHECK(profiles[2].at(Dimension::CI) == doctest::Approx(0.55));
}

TEST_CASE("api call accounting") {
  CHECK(api_call_cost(RoutingMode::Direct, 3) == 1);
  CHECK(api_call_cost(RoutingMode::Delegated, 3) == 4);
  CHECK(api_call_cost(RoutingMode::Collaborative, 3) == 6);
  CHECK(482 * api_call_cost(RoutingMode::Direct, 3) + 204 * api_call_cost(RoutingMode::Delegated, 3) +
            14 * api_call_cost(RoutingMode::Collaborative, 3) ==
        1382);
}

TEST_CASE("routing invariants over a simulated run") {
  auto tasks = generate(default_benchmark_spec(3));
  auto o = make_sim_orchestrator({Policy::Metacog, {}, 3});
  const MetacogParams params;
  const std::size_t n = o.roster_size();
  std::size_t checked = 0;
  for (const auto& rec : run_all(o, tasks)) {
    const auto& d = rec.decision;
    const auto& self = d.assessments.at(d.original_agent);
    CHECK(d.original_agent == dispatch(d.task_index, n));
    CHECK(d.api_calls == recorded_call_cost(d));
    CHECK(d.api_calls == api_call_cost(d.mode, n));
    CHECK(d.answers.size() == d.executing_agents.size());
    if (!should_delegate(self)) {
      CHECK(d.mode == RoutingMode::Direct);
      CHECK(d.executing_agents == std::vector<AgentId>{d.original_agent});
      continue;
    }
    CHECK(d.assessments.size() == n);
    AgentId best = n;
    for (AgentId j = 0; j < n; ++j) {
      if (j == d.original_agent) continue;
      if (best == n || d.assessments.at(j).fused > d.assessments.at(best).fused) best = j;
    }
    if (d.assessments.at(best).fused >= params.theta()) {
      CHECK(d.mode == RoutingMode::Delegated);
      CHECK(d.executing_agents == std::vector<AgentId>{best});
      for (const auto& [j, b] : d.assessments) {
        if (j != d.original_agent) CHECK(b.fused <= d.assessments.at(best).fused);
      }
    } else {
      CHECK(d.mode == RoutingMode::Collaborative);
      CHECK(d.executing_agents.size() == n);
    }
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("same seed, same decisions") {
  const auto tasks = generate(default_benchmark_spec(9));
  auto a = make_sim_orchestrator({Policy::Metacog, {}, 9});
  auto b = make_sim_orchestrator({Policy::Metacog, {}, 9});
  const auto ra = run_all(a, tasks);
  const auto rb = run_all(b, tasks);
  for (std::size_t k = 0; k < ra.size(); ++k) {
    CHECK(ra[k].decision.final_answer == rb[k].decision.final_answer);
    CHECK(ra[k].decision.mode == rb[k].decision.mode);
  }
  CHECK(a.profiles() == b.profiles());
}

TEST_CASE("baseline policies") {
  const auto tasks = generate(default_benchmark_spec(4));
  SUBCASE("single agent") {
    auto o = make_sim_orchestrator({Policy::SingleAgent, {}, 4});
    for (const auto& r : run_all(o, tasks)) {
      CHECK(r.decision.executing_agents == std::vector<AgentId>{0});
      CHECK(r.decision.api_calls == 1);
    }
  }
  SUBCASE("round robin") {
    auto o = make_sim_orchestrator({Policy::RoundRobin, {}, 4});
    for (const auto& r : run_all(o, tasks)) {
      CHECK(r.decision.executing_agents ==
            std::vector<AgentId>{dispatch(r.decision.task_index, 3)});
      CHECK(r.decision.assessments.empty());
    }
  }
  SUBCASE("random") {
    auto o = make_sim_orchestrator({Policy::Random, {}, 4});
    std::set<AgentId> used;
    for (const auto& r : run_all(o, tasks)) used.insert(r.decision.executing_agents.front());
    CHECK(used == std::set<AgentId>{0, 1, 2});
  }
  SUBCASE("skill fixed") {
    auto o = make_sim_orchestrator({Policy::SkillFixed, {}, 4});
    for (const auto& r : run_all(o, tasks)) {
      const auto& dims = r.dimensions;
      const AgentId exec = r.decision.executing_agents.front();
      if (std::find(dims.begin(), dims.end(), Dimension::LR) != dims.end()) {
        CHECK(exec == 0);
      } else if (std::find(dims.begin(), dims.end(), Dimension::KR) != dims.end()) {
        CHECK(exec == 1);
      } else if (std::find(dims.begin(), dims.end(), Dimension::CG) != dims.end()) {
        CHECK(exec == 2);
      } else {
        CHECK(exec == r.decision.original_agent);
      }
      CHECK((r.decision.mode == RoutingMode::Delegated) == (exec != r.decision.original_agent));
      CHECK(r.decision.api_calls == 1);
    }
  }
  SUBCASE("majority vote") {
    auto o = make_sim_orchestrator({Policy::MajorityVote, {}, 4});
    for (const auto& r : run_all(o, tasks)) {
      CHECK(r.decision.mode == RoutingMode::Collaborative);
      CHECK(r.decision.api_calls == 3);
    }
  }
}

TEST_CASE("ablation switches") {
  const auto tasks = generate(default_benchmark_spec(6));
  auto count_mode = [](const std::vector<TaskRecord>& rs, RoutingMode m) {
    return std::count_if(rs.begin(), rs.end(), [&](const auto& r) { return r.decision.mode == m; });
  };
  SUBCASE("no self assessment never delegates") {
    Ablation a;
    a.no_self_assessment = true;
    auto o = make_sim_orchestrator({Policy::Metacog, a, 6});
    const auto rs = run_all(o, tasks);
    CHECK(count_mode(rs, RoutingMode::Direct) == static_cast<long>(rs.size()));
    CHECK(rs.front().decision.assessments.begin()->second.fused == 0.5);
  }
  SUBCASE("no adaptive delegation always executes the assignee") {
    Ablation a;
    a.no_adaptive_delegation = true;
    auto o = make_sim_orchestrator({Policy::Metacog, a, 6});
    const auto rs = run_all(o, tasks);
    CHECK(count_mode(rs, RoutingMode::Direct) == static_cast<long>(rs.size()));
  }
  SUBCASE("no boundary learning freezes profiles") {
    Ablation a;
    a.no_boundary_learning = true;
    auto o = make_sim_orchestrator({Policy::Metacog, a, 6});
    run_all(o, tasks);
    CHECK(o.profiles() == std::vector<CapabilityProfile>(3, init_profile()));
  }
  SUBCASE("no cross-agent evaluation skips peer calls") {
    Ablation a;
    a.no_cross_agent_eval = true;
    auto o = make_sim_orchestrator({Policy::Metacog, a, 6});
    const auto rs = run_all(o, tasks);
    CHECK(count_mode(rs, RoutingMode::Direct) < static_cast<long>(rs.size()));
    for (const auto& r : rs) {
      CHECK(r.decision.peer_assessments == 0);
      if (r.decision.mode == RoutingMode::Delegated) CHECK(r.decision.api_calls == 2);
    }
  }
  SUBCASE("no verbalized confidence uses the profile alone") {
    Ablation a;
    a.no_verbalized = true;
    auto o = make_sim_orchestrator({Policy::Metacog, a, 6});
    CHECK(o.params().lambda() == 0.0);
    for (const auto& r : run_all(o, tasks)) {
      for (const auto& [j, b] : r.decision.assessments) CHECK(b.fused == doctest::Approx(b.profile));
    }
  }
  SUBCASE("ablations need the metacog policy") {
    Ablation a;
    a.no_verbalized = true;
    CHECK_THROWS_AS(make_sim_orchestrator({Policy::RoundRobin, a, 6}), std::invalid_argument);
  }
}

TEST_CASE("a single agent always executes directly") {
  RosterShape one;
  one.agents = 1;
  one.base_competence = 0.1;
  one.specialty_competence = 0.1;
  one.difficulty_step = 0.0;
  auto o = make_sim_orchestrator({Policy::Metacog, {}, 1}, one);
  const auto rs = run_all(o, generate(default_benchmark_spec(1)));
  for (const auto& r : rs) CHECK(r.decision.mode == RoutingMode::Direct);
}

TEST_CASE("low-competence roster triggers delegation") {
  RosterShape weak;
  weak.base_competence = 0.3;
  weak.specialty_competence = 0.35;
  weak.difficulty_step = 0.0;
  auto o = make_sim_orchestrator({Policy::Metacog, {}, 2}, weak);
  const auto rs = run_all(o, generate(default_benchmark_spec(2)));
  const auto non_direct = std::count_if(
      rs.begin(), rs.end(), [](const auto& r) { return r.decision.mode != RoutingMode::Direct; });
  CHECK(non_direct > 0);
}
