#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "odl/errors.hpp"
#include "odl/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Obstacle distance laboratory"};
  app.require_subcommand(1, 0);
  app.fallthrough();

  odl::ExperimentConfig cfg;
  std::vector<std::string> formats;
  app.add_option("--scene", cfg.scene_path, "Scene JSON file")->required();
  app.add_option("--resolution", cfg.h, "Grid spacing h")->capture_default_str();
  app.add_option("--out", cfg.output_dir, "Output directory")->required();
  app.add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  app.add_option("--format", formats, "Artifact formats (repeatable)")
      ->check(CLI::IsMember({"csv", "bin", "ndjson", "svg"}))
      ->take_all();
  app.add_option("--threshold", cfg.thresholds, "Threshold override key=value (repeatable)");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"solve", "Solve the distance field and check it against the oracle"},
      {"oracle", "Write the closed-form disk table and run the analytic checks"},
      {"minimize", "Trace minimizers and run the energy check"},
      {"singular", "Detect the singular set and run the boundary checks"},
      {"flow", "Integrate the generalized gradient flow"},
      {"scscan", "Fit semiconcavity exponents"},
      {"report", "Write report.json"},
      {"render", "Write scene.svg"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  CLI11_PARSE(app, argc, argv);
  for (const CLI::App* sub : app.get_subcommands()) cfg.commands.push_back(sub->get_name());
  if (!formats.empty()) cfg.formats = formats;

  odl::Report report;
  try {
    report = odl::run(cfg);
  } catch (const odl::Error& e) {
    std::fprintf(stderr, "odl: %s\n", e.what());
    return 2;
  }
  for (const std::string& name : odl::check_names()) {
    const odl::Verdict v = report.verdicts.at(name);
    if (v == odl::Verdict::inconclusive && report.notes.at(name) == "not evaluated by the requested commands") continue;
    std::printf("%-24s %-12s %s\n", name.c_str(), odl::to_string(v), report.notes.at(name).c_str());
  }
  for (const std::string& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  for (const std::string& e : report.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
  return report.exit_status();
}
