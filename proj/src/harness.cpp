#include "metacog/harness.hpp"

#include <cmath>
#include <cstdio>

#include "metacog/benchgen.hpp"
#include "metacog/serialization.hpp"

namespace metacog {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::optional<double> mean_defined(const std::vector<std::optional<double>>& xs) {
  std::vector<double> vals;
  for (const auto& x : xs) {
    if (x) vals.push_back(*x);
  }
  if (vals.empty()) return std::nullopt;
  return mean_of(vals);
}

std::optional<double> stddev_defined(const std::vector<std::optional<double>>& xs) {
  std::vector<double> vals;
  for (const auto& x : xs) {
    if (x) vals.push_back(*x);
  }
  if (vals.empty()) return std::nullopt;
  return stddev_of(vals);
}

}  // namespace

std::vector<std::string> agent_ids(const ExperimentConfig& config) {
  std::vector<std::string> ids;
  for (const auto& spec : config.roster) ids.push_back(spec.id);
  return ids;
}

std::vector<Task> load_tasks(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.benchmark_path) return read_benchmark(*config.benchmark_path);
  BenchmarkSpec spec = *config.generation;
  spec.seed = config.benchmark_seed.value_or(seed);
  return generate(spec);
}

RunResult run_single(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  const auto tasks = load_tasks(config, seed);
  const auto ids = agent_ids(config);

  RunResult result;
  result.seed = seed;
  result.initial_profiles =
      config.profiles_path
          ? read_profiles(*config.profiles_path, ids)
          : std::vector<CapabilityProfile>(config.roster.size(), init_profile(config.initial_profile));

  Orchestrator orchestrator(make_simulated_agents(config.roster), result.initial_profiles,
                            config.params, {config.policy, config.ablation, seed});
  result.records.reserve(tasks.size());
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    result.records.push_back(orchestrator.process(tasks[k], k));
  }
  result.final_profiles = orchestrator.profiles();
  result.report = compute_report(result.records, ids, std::string(to_string(config.policy)), seed);
  return result;
}

void persist_run(const fs::path& dir, const RunResult& result, const std::vector<std::string>& ids) {
  write_decision_log(dir / "decisions.jsonl", result.records);
  write_file_atomic(dir / "profiles.json", profiles_to_json(ids, result.final_profiles).dump(2) + "\n");
  write_file_atomic(dir / "report.json", dump_report(result.report));
  write_report_csvs(dir, result.report);
}

std::vector<AggregateRow> aggregate(const std::vector<RunResult>& runs) {
  std::vector<AggregateRow> rows;
  std::vector<double> acc, rate, calls;
  std::vector<std::optional<double>> prec, ece;
  for (const auto& r : runs) {
    const auto& rep = r.report;
    rows.push_back({std::to_string(r.seed), rep.overall_accuracy, rep.delegation_rate,
                    rep.delegation_precision, rep.ece, static_cast<double>(rep.total_api_calls)});
    acc.push_back(rep.overall_accuracy);
    rate.push_back(rep.delegation_rate);
    calls.push_back(static_cast<double>(rep.total_api_calls));
    prec.push_back(rep.delegation_precision);
    ece.push_back(rep.ece);
  }
  rows.push_back({"mean", mean_of(acc), mean_of(rate), mean_defined(prec), mean_defined(ece),
                  mean_of(calls)});
  rows.push_back({"stddev", stddev_of(acc), stddev_of(rate), stddev_defined(prec),
                  stddev_defined(ece), stddev_of(calls)});
  return rows;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string out = "seed,accuracy,delegation_rate,delegation_precision,ece,api_calls\n";
  for (const auto& r : rows) {
    out += r.label + "," + fmt(r.accuracy) + "," + fmt(r.delegation_rate) + "," +
           fmt(r.delegation_precision) + "," + fmt(r.ece) + "," + fmt(r.api_calls) + "\n";
  }
  return out;
}

std::vector<RunResult> run(const ExperimentConfig& config) {
  config.validate();
  const auto ids = agent_ids(config);
  std::vector<RunResult> runs;
  for (std::uint64_t seed : config.seeds) {
    runs.push_back(run_single(config, seed));
    if (!config.output_dir.empty()) {
      persist_run(config.output_dir / ("seed-" + std::to_string(seed)), runs.back(), ids);
    }
  }
  if (!config.output_dir.empty()) {
    write_file_atomic(config.output_dir / "aggregate.csv", aggregate_csv(aggregate(runs)));
  }
  return runs;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "theta") return SweepParameter::Theta;
  if (name == "lambda") return SweepParameter::Lambda;
  if (name == "alpha") return SweepParameter::Alpha;
  throw ConfigError("sweep parameter must be theta, lambda or alpha, got '" + std::string(name) + "'");
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Theta:
      return "theta";
    case SweepParameter::Lambda:
      return "lambda";
    case SweepParameter::Alpha:
      return "alpha";
  }
  return "?";
}

std::vector<double> default_sweep_grid(SweepParameter p) {
  switch (p) {
    case SweepParameter::Theta:
      return {0.3, 0.4, 0.5, 0.6, 0.7};
    case SweepParameter::Lambda:
      return {0.3, 0.5, 0.6, 0.7, 0.9};
    case SweepParameter::Alpha:
      return {0.01, 0.05, 0.1, 0.2, 0.3};
  }
  return {};
}

namespace {

MetacogParams with_value(const MetacogParams& base, SweepParameter p, double v) {
  switch (p) {
    case SweepParameter::Theta:
      return base.with_theta(v);
    case SweepParameter::Lambda:
      return base.with_lambda(v);
    case SweepParameter::Alpha:
      return base.with_alpha(v);
  }
  return base;
}

}  // namespace

std::vector<SweepRow> sweep(const ExperimentConfig& config, SweepParameter parameter,
                            const std::vector<double>& values) {
  config.validate();
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<MetacogParams> grid;
  for (double v : values) {
    try {
      grid.push_back(with_value(config.params, parameter, v));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("sweep over " + std::string(to_string(parameter)) + ": " + e.what());
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig variant = config;
    variant.params = grid[i];
    std::vector<double> acc, rate, calls;
    for (std::uint64_t seed : config.seeds) {
      const auto rep = run_single(variant, seed).report;
      acc.push_back(rep.overall_accuracy);
      rate.push_back(rep.delegation_rate);
      calls.push_back(static_cast<double>(rep.total_api_calls));
    }
    rows.push_back({values[i], mean_of(acc), mean_of(rate), mean_of(calls)});
  }
  return rows;
}

std::string sweep_csv(SweepParameter parameter, const std::vector<SweepRow>& rows) {
  std::string out = std::string(to_string(parameter)) + ",accuracy,delegation_rate,api_calls\n";
  for (const auto& r : rows) {
    out += fmt(r.value) + "," + fmt(r.accuracy) + "," + fmt(r.delegation_rate) + "," +
           fmt(r.api_calls) + "\n";
  }
  return out;
}

std::vector<std::pair<std::string, Ablation>> ablation_variants() {
  std::vector<std::pair<std::string, Ablation>> v;
  v.emplace_back("full", Ablation{});
  Ablation a;
  a.no_self_assessment = true;
  v.emplace_back("no_self_assessment", a);
  a = {};
  a.no_adaptive_delegation = true;
  v.emplace_back("no_adaptive_delegation", a);
  a = {};
  a.no_boundary_learning = true;
  v.emplace_back("no_boundary_learning", a);
  a = {};
  a.no_cross_agent_eval = true;
  v.emplace_back("no_cross_agent_eval", a);
  a = {};
  a.no_verbalized = true;
  v.emplace_back("no_verbalized", a);
  return v;
}

std::vector<AblationRow> ablate(const ExperimentConfig& config) {
  config.validate();
  if (config.policy != Policy::Metacog) throw ConfigError("ablate requires policy=metacog");

  std::vector<AblationRow> rows;
  for (const auto& [name, switches] : ablation_variants()) {
    ExperimentConfig variant = config;
    variant.ablation = switches;
    std::vector<double> acc, rate;
    std::vector<std::optional<double>> prec;
    for (std::uint64_t seed : config.seeds) {
      const auto rep = run_single(variant, seed).report;
      acc.push_back(rep.overall_accuracy);
      rate.push_back(rep.delegation_rate);
      prec.push_back(rep.delegation_precision);
    }
    AblationRow row;
    row.variant = name;
    row.accuracy = mean_of(acc);
    row.delegation_rate = mean_of(rate);
    row.delegation_precision = mean_defined(prec);
    rows.push_back(row);
  }
  for (auto& row : rows) row.delta = 100.0 * (row.accuracy - rows.front().accuracy);
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out = "variant,accuracy,delta,delegation_precision,delegation_rate\n";
  for (const auto& r : rows) {
    out += r.variant + "," + fmt(r.accuracy) + "," + fmt(r.delta) + "," + fmt(r.delegation_precision) +
           "," + fmt(r.delegation_rate) + "\n";
  }
  return out;
}

}  // namespace metacog
