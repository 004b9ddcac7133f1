#include "metacog/config.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "metacog/serialization.hpp"

namespace metacog {

namespace {

constexpr std::array<std::string_view, 29> kKeys{
    "params.lambda",
    "params.theta",
    "params.theta_delta",
    "params.gamma",
    "params.alpha",
    "policy",
    "seed",
    "out",
    "benchmark.path",
    "benchmark.seed",
    "benchmark.cross_count",
    "benchmark.cells.LR",
    "benchmark.cells.KR",
    "benchmark.cells.CG",
    "benchmark.cells.MC",
    "benchmark.cells.CI",
    "roster.agents",
    "roster.specialty_competence",
    "roster.base_competence",
    "roster.difficulty_step",
    "roster.bias",
    "roster.noise",
    "profile.initial",
    "profile.load",
    "ablation.no_self_assessment",
    "ablation.no_adaptive_delegation",
    "ablation.no_boundary_learning",
    "ablation.no_cross_agent_eval",
    "ablation.no_verbalized",
};
// roster.<agent id>.<field>
constexpr std::array<std::string_view, 2> kAgentFields{"bias", "noise"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ConfigError("config key '" + std::string(key) + "': expected " + std::string(want) +
                    ", got '" + std::string(value) + "'");
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "a number");
  return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "a non-negative integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "off" || value == "no") return false;
  bad_value(key, value, "a boolean");
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = value.find(',');
    parts.push_back(trim(value.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return parts;
}

bool is_static_key(std::string_view key) {
  return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

}  // namespace

ConfigMap parse_config_text(std::string_view text, std::string_view source) {
  ConfigMap map;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) +
                        ": expected key=value, got '" + std::string(line) + "'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": empty key");
    }
    map.insert_or_assign(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return map;
}

ConfigMap load_config_file(const std::filesystem::path& path) {
  return parse_config_text(read_file(path), path.string());
}

void apply_override(ConfigMap& map, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || trim(assignment.substr(0, eq)).empty()) {
    throw ConfigError("override must look like key=value, got '" + std::string(assignment) + "'");
  }
  map.insert_or_assign(std::string(trim(assignment.substr(0, eq))),
                       std::string(trim(assignment.substr(eq + 1))));
}

std::vector<std::string> known_config_keys() {
  std::vector<std::string> keys(kKeys.begin(), kKeys.end());
  for (auto field : kAgentFields) keys.push_back("roster.<agent id>." + std::string(field));
  return keys;
}

void ExperimentConfig::validate() const {
  if (benchmark_path.has_value() == generation.has_value()) {
    throw ConfigError("exactly one of benchmark.path or a generation spec must be given");
  }
  if (policy != Policy::Metacog && ablation.any()) {
    throw ConfigError("ablation switches require policy=metacog, got policy=" +
                      std::string(to_string(policy)));
  }
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (!(initial_profile >= 0.0 && initial_profile <= 1.0)) {
    throw ConfigError("profile.initial must lie in [0, 1]");
  }
  try {
    validate_roster(roster);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("roster: ") + e.what());
  }
}

ExperimentConfig build_config(const ConfigMap& map) {
  ExperimentConfig cfg;
  const auto get = [&](std::string_view key) -> std::optional<std::string_view> {
    const auto it = map.find(key);
    if (it == map.end()) return std::nullopt;
    return std::string_view(it->second);
  };

  std::set<std::string, std::less<>> agent_keys;
  for (const auto& [key, value] : map) {
    if (is_static_key(key)) continue;
    if (key.starts_with("roster.")) {
      agent_keys.insert(key);
      continue;
    }
    throw ConfigError("unknown config key '" + key + "'");
  }

  // Hyperparameters.
  double lambda = cfg.params.lambda(), theta = cfg.params.theta(),
         theta_delta = cfg.params.theta_delta(), gamma = cfg.params.gamma(),
         alpha = cfg.params.alpha();
  if (auto v = get("params.lambda")) lambda = to_double("params.lambda", *v);
  if (auto v = get("params.theta")) theta = to_double("params.theta", *v);
  if (auto v = get("params.theta_delta")) theta_delta = to_double("params.theta_delta", *v);
  if (auto v = get("params.gamma")) gamma = to_double("params.gamma", *v);
  if (auto v = get("params.alpha")) alpha = to_double("params.alpha", *v);
  try {
    cfg.params = MetacogParams(lambda, theta, theta_delta, gamma, alpha);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }

  if (auto v = get("policy")) {
    try {
      cfg.policy = parse_policy(*v);
    } catch (const DomainError&) {
      bad_value("policy", *v,
                "one of metacog, single_agent, round_robin, random, skill_fixed, majority_vote");
    }
  }
  if (auto v = get("seed")) {
    cfg.seeds.clear();
    for (auto part : split_list(*v)) cfg.seeds.push_back(to_uint("seed", part));
  }
  if (auto v = get("out")) cfg.output_dir = std::string(*v);

  // Benchmark source.
  const bool has_generation_keys =
      std::any_of(map.begin(), map.end(), [](const auto& kv) {
        return kv.first.starts_with("benchmark.") && kv.first != "benchmark.path";
      });
  if (auto v = get("benchmark.path")) {
    if (has_generation_keys) {
      throw ConfigError("benchmark.path cannot be combined with benchmark generation keys");
    }
    cfg.benchmark_path = std::string(*v);
  } else {
    BenchmarkSpec spec = default_benchmark_spec();
    if (auto v = get("benchmark.cross_count")) {
      spec.cross_domain_count = to_uint("benchmark.cross_count", *v);
    }
    for (Dimension d : kAllDimensions) {
      const std::string key = "benchmark.cells." + std::string(to_string(d));
      if (auto v = get(key)) {
        const auto parts = split_list(*v);
        if (parts.size() != kTierCount) bad_value(key, *v, "three counts (Easy,Medium,Hard)");
        for (std::size_t t = 0; t < kTierCount; ++t) {
          spec.per_cell_counts[dimension_index(d)][t] = to_uint(key, parts[t]);
        }
      }
    }
    if (auto v = get("benchmark.seed")) cfg.benchmark_seed = to_uint("benchmark.seed", *v);
    cfg.generation = spec;
  }

  // Roster.
  RosterShape& shape = cfg.roster_shape;
  if (auto v = get("roster.agents")) shape.agents = to_uint("roster.agents", *v);
  if (auto v = get("roster.specialty_competence")) {
    shape.specialty_competence = to_double("roster.specialty_competence", *v);
  }
  if (auto v = get("roster.base_competence")) {
    shape.base_competence = to_double("roster.base_competence", *v);
  }
  if (auto v = get("roster.difficulty_step")) {
    shape.difficulty_step = to_double("roster.difficulty_step", *v);
  }
  if (auto v = get("roster.bias")) shape.verbalization_bias = to_double("roster.bias", *v);
  if (auto v = get("roster.noise")) shape.verbalization_noise = to_double("roster.noise", *v);
  try {
    cfg.roster = make_roster(shape);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("roster: ") + e.what());
  }
  for (const auto& key : agent_keys) {
    const std::string_view rest = std::string_view(key).substr(std::string_view("roster.").size());
    const auto dot = rest.rfind('.');
    const auto id = rest.substr(0, dot == std::string_view::npos ? 0 : dot);
    const auto field = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
    auto agent = std::find_if(cfg.roster.begin(), cfg.roster.end(),
                              [&](const AgentSpec& s) { return s.id == id; });
    if (agent == cfg.roster.end() ||
        std::find(kAgentFields.begin(), kAgentFields.end(), field) == kAgentFields.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    const double value = to_double(key, map.find(key)->second);
    if (field == "bias") {
      agent->verbalization_bias = value;
    } else {
      agent->verbalization_noise = value;
    }
  }

  if (auto v = get("profile.initial")) cfg.initial_profile = to_double("profile.initial", *v);
  if (auto v = get("profile.load")) cfg.profiles_path = std::string(*v);

  if (auto v = get("ablation.no_self_assessment")) {
    cfg.ablation.no_self_assessment = to_bool("ablation.no_self_assessment", *v);
  }
  if (auto v = get("ablation.no_adaptive_delegation")) {
    cfg.ablation.no_adaptive_delegation = to_bool("ablation.no_adaptive_delegation", *v);
  }
  if (auto v = get("ablation.no_boundary_learning")) {
    cfg.ablation.no_boundary_learning = to_bool("ablation.no_boundary_learning", *v);
  }
  if (auto v = get("ablation.no_cross_agent_eval")) {
    cfg.ablation.no_cross_agent_eval = to_bool("ablation.no_cross_agent_eval", *v);
  }
  if (auto v = get("ablation.no_verbalized")) {
    cfg.ablation.no_verbalized = to_bool("ablation.no_verbalized", *v);
  }

  cfg.validate();
  return cfg;
}

}  // namespace metacog
