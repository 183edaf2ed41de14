#include "gpoly/records.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "gpoly/error.hpp"

namespace gpoly {

using nlohmann::json;

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(const MCEstimate& e) {
  return {{"mean", e.mean}, {"se", e.std_error}, {"ci95", {e.ci95_lo, e.ci95_hi}}, {"trials", e.trials}};
}

json params_json(const std::vector<std::pair<std::string, double>>& params) {
  json j = json::object();
  for (const auto& [key, value] : params) j[key] = value;
  return j;
}

json to_json(const VerificationReport& r) {
  json j;
  j["name"] = r.name;
  j["params"] = params_json(r.params);
  j["theory"] = r.theory;
  if (r.estimate) j["estimate"] = to_json(*r.estimate);
  if (r.z) j["z"] = *r.z;
  j["threshold"] = r.threshold;
  if (r.exact_condition) j["exact_condition"] = *r.exact_condition;
  if (!r.details.empty()) j["details"] = params_json(r.details);
  if (!r.note.empty()) j["note"] = r.note;
  j["status"] = r.passed ? "pass" : "fail";
  return j;
}

json to_json(const ConstantResult& c) {
  json j;
  j["name"] = c.name;
  j["params"] = params_json(c.parameters);
  j["value"] = c.value;
  j["argmax"] = std::vector<double>(c.argmax.data(), c.argmax.data() + c.argmax.size());
  j["grid_resolution"] = c.diagnostics.grid_resolution;
  j["near_optimal"] = c.diagnostics.near_optimal.size();
  j["status"] = "ok";
  return j;
}

json to_json(const RunRecord& r) {
  return {{"command", r.command_line},      {"params", r.params},         {"master_seed", r.master_seed},
          {"started_at", r.started_at},     {"finished_at", r.finished_at}, {"output_digest", r.output_digest},
          {"exit_code", r.exit_code},       {"version", r.version}};
}

RunRecord run_record_from_json(const json& j) {
  RunRecord r;
  r.command_line = j.at("command").get<std::string>();
  r.params = j.at("params");
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  r.started_at = j.at("started_at").get<std::string>();
  r.finished_at = j.at("finished_at").get<std::string>();
  r.output_digest = j.at("output_digest").get<std::string>();
  r.exit_code = j.at("exit_code").get<int>();
  r.version = j.at("version").get<std::string>();
  return r;
}

void append_run_record(const std::filesystem::path& dir, const RunRecord& record) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "runs.jsonl", std::ios::app);
  if (!out) throw Error("cannot open " + (dir / "runs.jsonl").string() + " for appending");
  out << to_json(record).dump() << '\n';
}

std::vector<RunRecord> read_run_records(const std::filesystem::path& dir) {
  std::ifstream in(dir / "runs.jsonl");
  if (!in) throw Error("cannot open " + (dir / "runs.jsonl").string());
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(run_record_from_json(json::parse(line)));
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace gpoly
