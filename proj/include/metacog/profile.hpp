#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "metacog/types.hpp"

namespace metacog {

inline constexpr double kDefaultInitialCompetence = 0.5;

// Per-agent success-rate estimates, one per capability dimension.
class CapabilityProfile {
 public:
  // All five dimensions start at `initial_value` with zero observations.
  explicit CapabilityProfile(double initial_value = kDefaultInitialCompetence);

  double at(Dimension d) const { return entries_[dimension_index(d)]; }
  std::uint64_t observations(Dimension d) const { return counts_[dimension_index(d)]; }

  // Restores a snapshot entry; value must lie in [0, 1].
  void set(Dimension d, double value, std::uint64_t observations = 0);

  // In-place EMA step p <- p + alpha * (r - p) on every listed dimension.
  void update(std::span<const Dimension> dimensions, bool success, double alpha);

  friend bool operator==(const CapabilityProfile&, const CapabilityProfile&) = default;

 private:
  std::array<double, kDimensionCount> entries_{};
  std::array<std::uint64_t, kDimensionCount> counts_{};
};

struct Outcome {
  std::string task_id;
  std::string answer;
  bool success = false;
  std::vector<AgentId> executing_agents;

  int reward() const { return success ? 1 : 0; }
};

CapabilityProfile init_profile(double initial_value = kDefaultInitialCompetence);

// Value-returning form of CapabilityProfile::update. Cross-domain tasks give
// every involved dimension the full step.
CapabilityProfile apply_feedback(CapabilityProfile profile, std::span<const Dimension> dimensions,
                                 bool success, double alpha);

// n_eff ~= 1 / alpha: the number of recent tasks an estimate effectively remembers.
double effective_memory_horizon(double alpha);

}  // namespace metacog
