// Runs the reference experiments and prints one PASS/FAIL line per
// acceptance criterion. Tolerances live in the runner's checks; this binary
// only combines scenes and adds the byte-level reproducibility comparison.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "odl/errors.hpp"
#include "odl/field_io.hpp"
#include "odl/runner.hpp"

namespace fs = std::filesystem;
using namespace odl;

namespace {

constexpr double kResolution = 0.005;
constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  bool evaluated = false;
  std::string detail;
};

Report run_scene(const std::string& scenes, const std::string& scene, const std::vector<std::string>& commands,
                 const fs::path& out) {
  ExperimentConfig cfg;
  cfg.scene_path = scenes + "/" + scene;
  cfg.h = kResolution;
  cfg.seed = kSeed;
  cfg.commands = commands;
  cfg.output_dir = out.string();
  fs::remove_all(out);
  return run(cfg);
}

Outcome from_report(const Report& r, const std::string& check, const std::string& tag = "") {
  Outcome o;
  const auto v = r.verdicts.find(check);
  const auto n = r.notes.find(check);
  const std::string note = n == r.notes.end() ? "" : n->second;
  o.detail = (tag.empty() ? "" : tag + ": ") + note;
  if (v == r.verdicts.end()) {
    o.detail = (tag.empty() ? "" : tag + ": ") + "not evaluated";
    return o;
  }
  o.evaluated = v->second != Verdict::inconclusive;
  o.pass = v->second == Verdict::pass;
  if (v->second == Verdict::inconclusive) o.detail += " (inconclusive)";
  return o;
}

Outcome both(const Outcome& a, const Outcome& b) {
  return {a.pass && b.pass, a.evaluated && b.evaluated, a.detail + "; " + b.detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance run for odl"};
  std::string out_dir = "acceptance_out";
  std::string scenes = ODL_SCENES_DIR;
  bool evaluate_only = false;
  app.add_option("--out", out_dir, "Working directory for run artifacts");
  app.add_option("--scenes", scenes, "Directory holding disk.json and crescent.json");
  app.add_flag("--evaluate-only", evaluate_only, "Exit 0 once every criterion was evaluated, even if some fail");
  CLI11_PARSE(app, argc, argv);

  const fs::path out(out_dir);
  const std::vector<std::string> all = {"solve", "oracle", "minimize", "singular", "flow", "scscan", "report"};
  Report disk, disk_again, crescent;
  try {
    disk = run_scene(scenes, "disk.json", all, out / "disk");
    disk_again = run_scene(scenes, "disk.json", all, out / "disk_again");
    crescent = run_scene(scenes, "crescent.json", {"solve", "singular", "report"}, out / "crescent");
  } catch (const Error& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 2;
  }
  for (const Report* r : {&disk, &disk_again, &crescent}) {
    for (const std::string& e : r->errors) std::fprintf(stderr, "error: %s\n", e.c_str());
  }

  std::vector<Outcome> outcomes;
  for (const std::string& check : check_names()) {
    if (check == "eikonal_residual" || check == "t_exsing" || check == "np_orthogonality") {
      outcomes.push_back(both(from_report(disk, check, "disk"), from_report(crescent, check, "crescent")));
    } else if (check == "t2nc_local") {
      outcomes.push_back(from_report(crescent, check, "crescent"));
    } else if (check == "determinism_convergence") {
      Outcome o = from_report(disk, check);
      const bool same = read_file((out / "disk" / "report.json").string()) ==
                        read_file((out / "disk_again" / "report.json").string());
      o.pass = o.pass && same;
      o.detail += same ? "; report.json byte-identical across runs" : "; report.json differs between runs";
      outcomes.push_back(o);
    } else {
      outcomes.push_back(from_report(disk, check));
    }
  }

  std::string text;
  int failed = 0, unevaluated = 0;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const Outcome& o = outcomes[k];
    char head[96];
    std::snprintf(head, sizeof head, "%s c%02zu %s ", o.pass ? "PASS" : "FAIL", k + 1, check_names()[k].c_str());
    text += head + o.detail + "\n";
    failed += !o.pass;
    unevaluated += !o.evaluated;
  }
  std::fputs(text.c_str(), stdout);
  std::printf("%zu criteria, %d failed, %d not evaluated\n", outcomes.size(), failed, unevaluated);
  write_file_atomic((out / "acceptance.txt").string(), text);

  const bool errors = !disk.errors.empty() || !disk_again.errors.empty() || !crescent.errors.empty();
  if (errors || unevaluated > 0) return 1;
  return evaluate_only ? 0 : (failed > 0 ? 1 : 0);
}
