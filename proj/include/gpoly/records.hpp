#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gpoly/experiments.hpp"
#include "gpoly/theory.hpp"
#include "gpoly/verify.hpp"

namespace gpoly {

inline constexpr std::string_view kVersion = "0.1.0";

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

nlohmann::json to_json(const MCEstimate& e);
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const ConstantResult& c);
nlohmann::json params_json(const std::vector<std::pair<std::string, double>>& params);

/// One invocation of the command-line tool. Timestamps live here and only
/// here, so primary outputs stay byte-reproducible.
struct RunRecord {
  std::string command_line;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t master_seed = 0;
  std::string started_at;
  std::string finished_at;
  std::string output_digest;
  int exit_code = 0;
  std::string version = std::string(kVersion);
};

nlohmann::json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);

/// Appends one line to <dir>/runs.jsonl, creating the directory if needed.
void append_run_record(const std::filesystem::path& dir, const RunRecord& record);
std::vector<RunRecord> read_run_records(const std::filesystem::path& dir);

/// Current UTC time as ISO 8601 with seconds.
std::string utc_timestamp();

}  // namespace gpoly
