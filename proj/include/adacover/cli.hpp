#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace adacover::cli {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr const char* kOutDirEnv = "ADACOVER_OUT_DIR";

enum ExitCode : int {
  kSuccess = 0,
  kVerdictFailure = 1,
  kInvalidConfig = 2,
  kRuntimeError = 3,
};

/// Resolved configuration for one run: file values overlaid by flags.
struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> values;
  std::string out_dir;
  std::uint64_t master_seed = 0;
};

struct RunReport {
  nlohmann::json config;
  nlohmann::json results;
  double elapsed_seconds = 0.0;
  std::string version = kVersion;
  std::optional<bool> passed;
  /// CSV series keyed by file name (e.g. "delta1.csv").
  std::map<std::string, std::string> series;

  nlohmann::json to_json() const;
};

/// Runs one subcommand in memory: validates keys, computes, fills config and
/// timing. Nothing is written and nothing is printed.
RunReport execute(const RunConfig& cfg);

/// Writes report.json and every CSV series; returns the paths written.
std::vector<std::string> emit_report(const RunReport& report, const std::string& dir);

/// Entry point behind the adacover executable.
int dispatch(int argc, char** argv);
int dispatch(const std::vector<std::string>& args);

}  // namespace adacover::cli
