// metacog: experiment driver for the metacognitive routing engine.
//
//   metacog generate [--config PATH] [--seed N] [--out DIR]
//   metacog run      [--config PATH] [--seed N]... [--out DIR] [--policy NAME] [--param K=V]...
//   metacog sweep    --sweep theta|lambda|alpha [--values a,b,c] [common flags]
//   metacog ablate   [common flags]
//   metacog report   --log decisions.jsonl [common flags]
//
// Settings resolve as built-in defaults < config file < command-line flags.
// Exit codes: 0 ok, 1 internal, 2 usage or config, 3 I/O, 4 malformed input.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "metacog/benchgen.hpp"
#include "metacog/config.hpp"
#include "metacog/harness.hpp"
#include "metacog/metrics.hpp"
#include "metacog/serialization.hpp"

namespace {

using namespace metacog;

enum ExitCode : int { kOk = 0, kInternal = 1, kConfig = 2, kIo = 3, kFormat = 4 };

struct CommonFlags {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::string policy;
  std::vector<std::string> params;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key=value config file");
  cmd->add_option("--seed", flags.seeds, "run seed (repeatable)");
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--policy", flags.policy,
                  "metacog|single_agent|round_robin|random|skill_fixed|majority_vote");
  cmd->add_option("--param", flags.params, "KEY=VALUE override (repeatable)");
}

ConfigMap resolve(const CommonFlags& flags) {
  ConfigMap map;
  if (!flags.config_path.empty()) map = load_config_file(flags.config_path);
  if (!flags.seeds.empty()) {
    std::string joined;
    for (auto s : flags.seeds) joined += (joined.empty() ? "" : ",") + std::to_string(s);
    map["seed"] = joined;
  }
  if (!flags.out.empty()) map["out"] = flags.out;
  if (!flags.policy.empty()) map["policy"] = flags.policy;
  for (const auto& p : flags.params) apply_override(map, p);
  return map;
}

std::filesystem::path require_out(const ExperimentConfig& cfg) {
  if (cfg.output_dir.empty()) throw ConfigError("--out (or out=) is required");
  return cfg.output_dir;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string part = text.substr(start, comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw ConfigError("bad sweep value '" + part + "'");
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

void print_report(const ExperimentReport& rep) {
  std::printf("seed %llu  policy %s  accuracy %.4f  delegation %.4f  precision %s  ece %s  calls %zu\n",
              static_cast<unsigned long long>(rep.seed), rep.policy.c_str(), rep.overall_accuracy,
              rep.delegation_rate,
              rep.delegation_precision ? std::to_string(*rep.delegation_precision).c_str() : "-",
              rep.ece ? std::to_string(*rep.ece).c_str() : "-", rep.total_api_calls);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metacognitive multi-agent routing: benchmark generation, runs, sweeps, ablations"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* gen = app.add_subcommand("generate", "write a synthetic benchmark as JSONL");
  add_common(gen, flags);

  auto* run_cmd = app.add_subcommand("run", "run a policy over the benchmark");
  add_common(run_cmd, flags);

  std::string sweep_name;
  std::string sweep_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "sensitivity sweep over one hyperparameter");
  add_common(sweep_cmd, flags);
  sweep_cmd->add_option("--sweep", sweep_name, "theta|lambda|alpha")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated grid (default: standard grid)");

  auto* ablate_cmd = app.add_subcommand("ablate", "full system against its five ablations");
  add_common(ablate_cmd, flags);

  std::string log_path;
  auto* report_cmd = app.add_subcommand("report", "recompute metrics from a decision log");
  add_common(report_cmd, flags);
  report_cmd->add_option("--log", log_path, "decisions.jsonl")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    const ExperimentConfig cfg = build_config(resolve(flags));

    if (gen->parsed()) {
      const auto out = require_out(cfg);
      const auto tasks = load_tasks(cfg, cfg.seeds.front());
      write_benchmark(out / "benchmark.jsonl", tasks);
      std::printf("wrote %zu tasks to %s\n", tasks.size(), (out / "benchmark.jsonl").c_str());
    } else if (run_cmd->parsed()) {
      const auto runs = run(cfg);
      for (const auto& r : runs) print_report(r.report);
      if (runs.size() > 1) std::cout << aggregate_csv(aggregate(runs));
    } else if (sweep_cmd->parsed()) {
      const auto param = parse_sweep_parameter(sweep_name);
      const auto values = sweep_values.empty() ? default_sweep_grid(param) : parse_values(sweep_values);
      const auto csv = sweep_csv(param, sweep(cfg, param, values));
      if (!cfg.output_dir.empty()) write_file_atomic(cfg.output_dir / "sweep.csv", csv);
      std::cout << csv;
    } else if (ablate_cmd->parsed()) {
      const auto csv = ablation_csv(ablate(cfg));
      if (!cfg.output_dir.empty()) write_file_atomic(cfg.output_dir / "ablation.csv", csv);
      std::cout << csv;
    } else if (report_cmd->parsed()) {
      const auto records = read_decision_log(log_path);
      const auto rep = compute_report(records, agent_ids(cfg), std::string(to_string(cfg.policy)),
                                      cfg.seeds.front());
      if (!cfg.output_dir.empty()) {
        write_file_atomic(cfg.output_dir / "report.json", dump_report(rep));
        write_report_csvs(cfg.output_dir, rep);
      }
      print_report(rep);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error[config]: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "error[io]: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "error[format]: " << e.what() << "\n";
    return kFormat;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
