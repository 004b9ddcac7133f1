#include "metacog/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace metacog {

namespace fs = std::filesystem;

namespace {

Json optional_to_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> optional_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string format_number(std::optional<double> v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

Json dimensions_to_json(const std::vector<Dimension>& dims) {
  Json arr = Json::array();
  for (Dimension d : dims) arr.push_back(std::string(to_string(d)));
  return arr;
}

std::vector<Dimension> dimensions_from_json(const Json& j) {
  std::vector<Dimension> dims;
  for (const auto& label : j) dims.push_back(parse_dimension(label.get<std::string>()));
  return dims;
}

Json stratum_to_json(const StratumAccuracy& s) {
  Json j;
  j["label"] = s.label;
  j["count"] = s.count;
  j["correct"] = s.correct;
  j["accuracy"] = optional_to_json(s.accuracy);
  return j;
}

StratumAccuracy stratum_from_json(const Json& j) {
  StratumAccuracy s;
  s.label = j.at("label").get<std::string>();
  s.count = j.at("count").get<std::size_t>();
  s.correct = j.at("correct").get<std::size_t>();
  s.accuracy = optional_from_json(j.at("accuracy"));
  return s;
}

// Runs `fn`, converting parse and schema failures into FormatError tagged
// with `where`.
template <typename Fn>
auto guarded(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw FormatError(where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(where + ": " + e.what());
  }
}

template <typename T, typename Parse>
std::vector<T> read_jsonl(const fs::path& path, Parse&& parse) {
  std::istringstream in(read_file(path));
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(guarded(path.string() + ":" + std::to_string(line_no),
                          [&] { return parse(Json::parse(line)); }));
  }
  return out;
}

}  // namespace

Json task_to_json(const Task& task) {
  Json j;
  j["id"] = task.id;
  j["prompt"] = task.prompt;
  j["dimensions"] = dimensions_to_json(task.dimensions);
  j["difficulty"] = std::string(to_string(task.difficulty));
  j["ground_truth"] = task.ground_truth;
  j["distractors"] = task.distractors;
  return j;
}

static Task parse_task(const Json& j) {
  Task task;
  task.id = j.at("id").get<std::string>();
  task.prompt = j.at("prompt").get<std::string>();
  task.dimensions = dimensions_from_json(j.at("dimensions"));
  task.difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
  task.ground_truth = j.at("ground_truth").get<std::string>();
  task.distractors = j.at("distractors").get<std::vector<std::string>>();
  validate_task(task);
  return task;
}

Task task_from_json(const Json& j) {
  return guarded("task", [&] { return parse_task(j); });
}

Json record_to_json(const TaskRecord& record) {
  const RoutingDecision& d = record.decision;
  Json j;
  j["task_id"] = d.task_id;
  j["task_index"] = d.task_index;
  j["difficulty"] = std::string(to_string(record.difficulty));
  j["dimensions"] = dimensions_to_json(record.dimensions);
  j["mode"] = std::string(to_string(d.mode));
  j["original_agent"] = d.original_agent;
  j["executing_agents"] = d.executing_agents;
  Json assessments = Json::array();
  for (const auto& [agent, b] : d.assessments) {
    Json a;
    a["agent"] = agent;
    a["verbalized"] = b.verbalized;
    a["profile"] = b.profile;
    a["fused"] = b.fused;
    a["conflict"] = b.conflict;
    a["effective_threshold"] = b.effective_threshold;
    assessments.push_back(std::move(a));
  }
  j["assessments"] = std::move(assessments);
  Json answers = Json::array();
  for (const auto& a : d.answers) answers.push_back(Json{{"agent", a.agent}, {"answer", a.answer}});
  j["answers"] = std::move(answers);
  j["final_answer"] = d.final_answer;
  j["standalone_self_assessment"] = d.standalone_self_assessment;
  j["peer_assessments"] = d.peer_assessments;
  j["api_calls"] = d.api_calls;
  j["reward"] = record.outcome.reward();
  return j;
}

static TaskRecord parse_record(const Json& j) {
  TaskRecord r;
  RoutingDecision& d = r.decision;
  d.task_id = j.at("task_id").get<std::string>();
  d.task_index = j.at("task_index").get<std::size_t>();
  r.difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
  r.dimensions = dimensions_from_json(j.at("dimensions"));
  d.mode = parse_routing_mode(j.at("mode").get<std::string>());
  d.original_agent = j.at("original_agent").get<AgentId>();
  d.executing_agents = j.at("executing_agents").get<std::vector<AgentId>>();
  for (const auto& a : j.at("assessments")) {
    ConfidenceBreakdown b;
    b.verbalized = a.at("verbalized").get<double>();
    b.profile = a.at("profile").get<double>();
    b.fused = a.at("fused").get<double>();
    b.conflict = a.at("conflict").get<double>();
    b.effective_threshold = a.at("effective_threshold").get<double>();
    d.assessments[a.at("agent").get<AgentId>()] = b;
  }
  for (const auto& a : j.at("answers")) {
    d.answers.push_back({a.at("agent").get<AgentId>(), a.at("answer").get<std::string>()});
  }
  d.final_answer = j.at("final_answer").get<std::string>();
  d.standalone_self_assessment = j.at("standalone_self_assessment").get<bool>();
  d.peer_assessments = j.at("peer_assessments").get<std::size_t>();
  d.api_calls = j.at("api_calls").get<std::size_t>();
  if (d.executing_agents.empty()) throw std::invalid_argument("record without executing agents");

  const int reward = j.at("reward").get<int>();
  if (reward != 0 && reward != 1) throw std::invalid_argument("reward must be 0 or 1");
  r.outcome.task_id = d.task_id;
  r.outcome.answer = d.final_answer;
  r.outcome.success = reward == 1;
  r.outcome.executing_agents = d.executing_agents;
  return r;
}

TaskRecord record_from_json(const Json& j) {
  return guarded("decision record", [&] { return parse_record(j); });
}

Json report_to_json(const ExperimentReport& rep) {
  Json j;
  j["policy"] = rep.policy;
  j["seed"] = rep.seed;
  j["agent_ids"] = rep.agent_ids;
  j["task_count"] = rep.task_count;
  j["correct_count"] = rep.correct_count;
  j["overall_accuracy"] = rep.overall_accuracy;

  Json by_diff = Json::array();
  for (std::size_t i = 0; i < rep.stratified.by_difficulty.size(); ++i) {
    Json s = stratum_to_json(rep.stratified.by_difficulty[i]);
    s["delegation_rate"] = optional_to_json(rep.delegation_rate_by_difficulty.at(i));
    s["ece"] = optional_to_json(rep.ece_by_difficulty.at(i));
    by_diff.push_back(std::move(s));
  }
  j["per_difficulty"] = std::move(by_diff);
  Json by_dim = Json::array();
  for (const auto& s : rep.stratified.by_dimension) by_dim.push_back(stratum_to_json(s));
  j["per_dimension"] = std::move(by_dim);
  j["delta_easy_to_hard"] = optional_to_json(rep.stratified.delta_easy_to_hard);

  j["mode_counts"] = Json{{"Direct", rep.direct_count},
                          {"Delegated", rep.delegated_count},
                          {"Collaborative", rep.collaborative_count}};
  j["delegation_rate"] = rep.delegation_rate;
  j["delegation_precision"] = optional_to_json(rep.delegation_precision);
  j["ece"] = optional_to_json(rep.ece);
  Json bins = Json::array();
  for (const auto& b : rep.reliability) {
    bins.push_back(Json{{"lower", b.lower},
                        {"upper", b.upper},
                        {"count", b.count},
                        {"mean_confidence", b.mean_confidence},
                        {"accuracy", b.accuracy}});
  }
  j["reliability_bins"] = std::move(bins);
  j["delegation_flow"] = rep.delegation_flow;
  j["total_api_calls"] = rep.total_api_calls;
  return j;
}

static ExperimentReport parse_report(const Json& j) {
  ExperimentReport rep;
  rep.policy = j.at("policy").get<std::string>();
  rep.seed = j.at("seed").get<std::uint64_t>();
  rep.agent_ids = j.at("agent_ids").get<std::vector<std::string>>();
  rep.task_count = j.at("task_count").get<std::size_t>();
  rep.correct_count = j.at("correct_count").get<std::size_t>();
  rep.overall_accuracy = j.at("overall_accuracy").get<double>();
  const auto& by_diff = j.at("per_difficulty");
  if (by_diff.size() != kDifficultyCount) throw std::invalid_argument("per_difficulty needs 4 strata");
  for (std::size_t i = 0; i < kDifficultyCount; ++i) {
    rep.stratified.by_difficulty.push_back(stratum_from_json(by_diff[i]));
    rep.delegation_rate_by_difficulty[i] = optional_from_json(by_diff[i].at("delegation_rate"));
    rep.ece_by_difficulty[i] = optional_from_json(by_diff[i].at("ece"));
  }
  for (const auto& s : j.at("per_dimension")) rep.stratified.by_dimension.push_back(stratum_from_json(s));
  rep.stratified.delta_easy_to_hard = optional_from_json(j.at("delta_easy_to_hard"));
  const auto& modes = j.at("mode_counts");
  rep.direct_count = modes.at("Direct").get<std::size_t>();
  rep.delegated_count = modes.at("Delegated").get<std::size_t>();
  rep.collaborative_count = modes.at("Collaborative").get<std::size_t>();
  rep.delegation_rate = j.at("delegation_rate").get<double>();
  rep.delegation_precision = optional_from_json(j.at("delegation_precision"));
  rep.ece = optional_from_json(j.at("ece"));
  for (const auto& b : j.at("reliability_bins")) {
    rep.reliability.push_back({b.at("lower").get<double>(), b.at("upper").get<double>(),
                               b.at("count").get<std::size_t>(),
                               b.at("mean_confidence").get<double>(), b.at("accuracy").get<double>()});
  }
  rep.delegation_flow = j.at("delegation_flow").get<FlowMatrix>();
  rep.total_api_calls = j.at("total_api_calls").get<std::size_t>();
  return rep;
}

ExperimentReport report_from_json(const Json& j) {
  return guarded("report", [&] { return parse_report(j); });
}

Json profiles_to_json(const std::vector<std::string>& agent_ids,
                      const std::vector<CapabilityProfile>& profiles) {
  if (agent_ids.size() != profiles.size()) {
    throw std::invalid_argument("profile snapshot needs one id per profile");
  }
  Json j = Json::object();
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    Json entry = Json::object();
    for (Dimension d : kAllDimensions) {
      entry[std::string(to_string(d))] =
          Json{{"value", profiles[i].at(d)}, {"count", profiles[i].observations(d)}};
    }
    j[agent_ids[i]] = std::move(entry);
  }
  return j;
}

std::vector<CapabilityProfile> profiles_from_json(const Json& j,
                                                  const std::vector<std::string>& agent_ids) {
  std::vector<CapabilityProfile> out;
  for (const auto& id : agent_ids) {
    if (!j.contains(id)) throw FormatError("profile snapshot has no entry for agent '" + id + "'");
    const Json& entry = j.at(id);
    CapabilityProfile profile;
    guarded("profile snapshot for '" + id + "'", [&] {
      for (Dimension d : kAllDimensions) {
        const Json& cell = entry.at(std::string(to_string(d)));
        profile.set(d, cell.at("value").get<double>(), cell.at("count").get<std::uint64_t>());
      }
      return 0;
    });
    out.push_back(profile);
  }
  return out;
}

std::vector<CapabilityProfile> read_profiles(const fs::path& path,
                                             const std::vector<std::string>& agent_ids) {
  const std::string text = read_file(path);
  const Json doc = guarded(path.string(), [&] { return Json::parse(text); });
  return profiles_from_json(doc, agent_ids);
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_benchmark(const fs::path& path, const std::vector<Task>& tasks) {
  std::string out;
  for (const Task& t : tasks) {
    out += task_to_json(t).dump();
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<Task> read_benchmark(const fs::path& path) {
  return read_jsonl<Task>(path, [](const Json& j) { return task_from_json(j); });
}

std::string dump_decision_log(const std::vector<TaskRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

void write_decision_log(const fs::path& path, const std::vector<TaskRecord>& records) {
  write_file_atomic(path, dump_decision_log(records));
}

std::vector<TaskRecord> read_decision_log(const fs::path& path) {
  return read_jsonl<TaskRecord>(path, [](const Json& j) { return record_from_json(j); });
}

std::string dump_report(const ExperimentReport& report) { return report_to_json(report).dump(2) + "\n"; }

ExperimentReport read_report(const fs::path& path) {
  const std::string text = read_file(path);
  return guarded(path.string(), [&] { return report_from_json(Json::parse(text)); });
}

std::string reliability_csv(const ExperimentReport& rep) {
  std::string out = "bin,lower,upper,count,mean_confidence,accuracy\n";
  for (std::size_t k = 0; k < rep.reliability.size(); ++k) {
    const auto& b = rep.reliability[k];
    const bool filled = b.count > 0;
    out += std::to_string(k) + "," + format_number(b.lower) + "," + format_number(b.upper) + "," +
           std::to_string(b.count) + "," +
           (filled ? format_number(b.mean_confidence) : std::string()) + "," +
           (filled ? format_number(b.accuracy) : std::string()) + "\n";
  }
  return out;
}

void write_report_csvs(const fs::path& dir, const ExperimentReport& rep) {
  std::string summary = "metric,value\n";
  summary += "policy," + rep.policy + "\n";
  summary += "seed," + std::to_string(rep.seed) + "\n";
  summary += "tasks," + std::to_string(rep.task_count) + "\n";
  summary += "accuracy," + format_number(rep.overall_accuracy) + "\n";
  summary += "delegation_rate," + format_number(rep.delegation_rate) + "\n";
  summary += "delegation_precision," + format_number(rep.delegation_precision) + "\n";
  summary += "ece," + format_number(rep.ece) + "\n";
  summary += "api_calls," + std::to_string(rep.total_api_calls) + "\n";
  summary += "direct," + std::to_string(rep.direct_count) + "\n";
  summary += "delegated," + std::to_string(rep.delegated_count) + "\n";
  summary += "collaborative," + std::to_string(rep.collaborative_count) + "\n";
  summary += "delta_easy_to_hard," + format_number(rep.stratified.delta_easy_to_hard) + "\n";
  write_file_atomic(dir / "summary.csv", summary);

  std::string by_diff = "difficulty,count,correct,accuracy,delegation_rate,ece\n";
  for (std::size_t i = 0; i < rep.stratified.by_difficulty.size(); ++i) {
    const auto& s = rep.stratified.by_difficulty[i];
    by_diff += s.label + "," + std::to_string(s.count) + "," + std::to_string(s.correct) + "," +
               format_number(s.accuracy) + "," + format_number(rep.delegation_rate_by_difficulty.at(i)) +
               "," + format_number(rep.ece_by_difficulty.at(i)) + "\n";
  }
  write_file_atomic(dir / "accuracy_by_difficulty.csv", by_diff);

  std::string by_dim = "dimension,count,correct,accuracy\n";
  for (const auto& s : rep.stratified.by_dimension) {
    by_dim += s.label + "," + std::to_string(s.count) + "," + std::to_string(s.correct) + "," +
              format_number(s.accuracy) + "\n";
  }
  write_file_atomic(dir / "accuracy_by_dimension.csv", by_dim);

  write_file_atomic(dir / "reliability.csv", reliability_csv(rep));

  std::string flow = "from";
  for (const auto& id : rep.agent_ids) flow += "," + id;
  flow += "\n";
  for (std::size_t i = 0; i < rep.delegation_flow.size(); ++i) {
    flow += i < rep.agent_ids.size() ? rep.agent_ids[i] : std::to_string(i);
    for (std::size_t c : rep.delegation_flow[i]) flow += "," + std::to_string(c);
    flow += "\n";
  }
  write_file_atomic(dir / "delegation_flow.csv", flow);
}

}  // namespace metacog
