#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace odl {

struct ExperimentConfig {
  std::string scene_path;
  double h = 0.01;
  /// Any of solve, oracle, minimize, singular, flow, scscan, report, render.
  /// They run in that order whatever order they are listed in.
  std::vector<std::string> commands;
  std::string output_dir;
  std::uint64_t seed = 1;
  /// "key=value" threshold overrides, applied in order.
  std::vector<std::string> thresholds;
  /// Artifact formats: csv and bin for the field, csv and ndjson for the
  /// singular mask, svg adds a rendered figure. Paths and arcs are always
  /// ndjson.
  std::vector<std::string> formats = {"csv", "ndjson"};
};

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

struct Report {
  /// One entry per acceptance check, keyed by check name.
  std::map<std::string, Verdict> verdicts;
  std::map<std::string, std::string> notes;
  std::map<std::string, double> metrics;
  std::vector<std::string> files;     // artifacts written, relative to output_dir
  std::vector<std::string> warnings;
  std::vector<std::string> errors;    // "command: code: message"
  std::string config_hash;
  std::string version;
  std::string scene_json;  // canonical scene description
  std::vector<std::pair<std::string, double>> thresholds;
  /// Fixed interpretation notes: "metric" (A vs A^-1) and "involute".
  std::map<std::string, std::string> conventions;
  /// Wall-clock seconds per stage. Kept out of to_json so reports stay
  /// byte-identical across runs.
  std::map<std::string, double> timings;

  bool any_fail() const;
  /// 0 iff no verdict is fail and no command failed.
  int exit_status() const;
  /// Canonical report.json text (schema "odl-report/1").
  std::string to_json(const ExperimentConfig& config) const;
};

/// The check names, in acceptance order.
const std::vector<std::string>& check_names();

/// Validates the config, loads the scene, creates output_dir and runs the
/// requested commands. A failing command is recorded in Report::errors and
/// its dependents are skipped; artifacts already produced are kept and an
/// errors.json manifest is written next to them. Configuration errors and
/// unreadable scenes throw before anything is written.
Report run(const ExperimentConfig& config);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace odl
