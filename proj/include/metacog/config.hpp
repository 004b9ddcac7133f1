#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metacog/agents.hpp"
#include "metacog/benchgen.hpp"
#include "metacog/mcu.hpp"
#include "metacog/orchestrator.hpp"

namespace metacog {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat dotted-key settings, e.g. params.theta=0.5.
using ConfigMap = std::map<std::string, std::string, std::less<>>;

// Parses `key = value` lines. Blank lines and lines starting with '#' are
// skipped; anything else without '=' is an error naming `source` and the
// line number.
ConfigMap parse_config_text(std::string_view text, std::string_view source = "<config>");
ConfigMap load_config_file(const std::filesystem::path& path);

// Applies one `key=value` override on top of `map`.
void apply_override(ConfigMap& map, std::string_view assignment);

struct ExperimentConfig {
  MetacogParams params;
  RosterShape roster_shape;
  std::vector<AgentSpec> roster;
  Policy policy = Policy::Metacog;
  Ablation ablation;

  // Exactly one benchmark source.
  std::optional<std::filesystem::path> benchmark_path;
  std::optional<BenchmarkSpec> generation;
  // When unset, a generated benchmark reuses each run's seed.
  std::optional<std::uint64_t> benchmark_seed;

  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir;  // empty: nothing is written

  double initial_profile = kDefaultInitialCompetence;
  std::optional<std::filesystem::path> profiles_path;

  // Throws ConfigError on any broken invariant.
  void validate() const;
};

// Built-in defaults overlaid with `map`. Unknown keys and unparsable values
// are ConfigErrors naming the key.
ExperimentConfig build_config(const ConfigMap& map);

// Every key build_config understands, for help output.
std::vector<std::string> known_config_keys();

}  // namespace metacog
