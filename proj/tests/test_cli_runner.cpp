#include <doctest.h>

#include <filesystem>
#include <string>

#include "odl/eikonal.hpp"
#include "odl/errors.hpp"
#include "odl/field_io.hpp"
#include "odl/runner.hpp"
#include "odl/scene_io.hpp"
#include "odl/singularity.hpp"
#include "odl/svg.hpp"

using namespace odl;
namespace fs = std::filesystem;

namespace {

std::string scene_path(const char* name) { return std::string(ODL_SCENES_DIR) + "/" + name; }

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("odl_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("scene files load") {
  for (const char* name : {"disk.json", "crescent.json", "free.json", "ellipse.json"}) {
    CAPTURE(name);
    const Scene s = load_scene(scene_path(name));
    // Round trip through the canonical form.
    const Scene t = scene_from_json(scene_to_json(s));
    CHECK(scene_to_json(t) == scene_to_json(s));
  }
}

TEST_CASE("malformed scene reports line and column") {
  try {
    scene_from_json("{\n  \"k0\": [1, 2],\n  \"bbox\": oops\n}", "bad.json");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
    CHECK(std::string(e.what()).find("bad.json:3:") != std::string::npos);
  }
  try {
    scene_from_json(R"({"obstacle": {"kind": "disk", "center": [0, 0]}, "k0": [2, 0], "bbox": [[-3, -3], [3, 3]]})",
                    "s.json");
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("obstacle.radius") != std::string::npos);
  }
}

TEST_CASE("metric given by its inverse") {
  const Scene s = scene_from_json(
      R"({"obstacle": {"kind": "none"}, "k0": [0, 0], "bbox": [[-1, -1], [1, 1]],
          "metric": {"kind": "matrix", "A_inv": [[0.25, 0], [0, 1]]}})");
  CHECK(s.metric().matrix().a11 == doctest::Approx(4.0));
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("config validation happens before any output") {
  const fs::path out = fresh_dir("invalid");
  ExperimentConfig cfg;
  cfg.scene_path = scene_path("missing.json");
  cfg.commands = {"solve"};
  cfg.output_dir = out.string();
  CHECK_THROWS_AS(run(cfg), Error);
  CHECK_FALSE(fs::exists(out));

  cfg.scene_path = scene_path("free.json");
  cfg.commands = {"explode"};
  CHECK_THROWS_AS(run(cfg), Error);
  cfg.commands = {"solve"};
  cfg.formats = {"xlsx"};
  CHECK_THROWS_AS(run(cfg), Error);
  cfg.formats = {"csv"};
  cfg.h = 1.0;
  CHECK_THROWS_AS(run(cfg), Error);
  cfg.h = 0.02;
  cfg.commands.clear();
  CHECK_THROWS_AS(run(cfg), Error);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("runs are reproducible") {
  ExperimentConfig cfg;
  cfg.scene_path = scene_path("free.json");
  cfg.h = 0.02;
  cfg.commands = {"report", "solve", "singular"};
  cfg.formats = {"csv", "bin", "ndjson", "svg"};
  const std::string dir_a = fresh_dir("run_a").string();
  cfg.output_dir = dir_a;
  const Report a = run(cfg);
  cfg.output_dir = fresh_dir("run_b").string();
  const Report b = run(cfg);

  CHECK(a.errors.empty());
  CHECK(a.exit_status() == 0);
  const std::string ja = read_file(dir_a + "/report.json");
  const std::string jb = read_file(cfg.output_dir + "/report.json");
  CHECK(ja == jb);
  CHECK(ja.find("\"odl-report/1\"") != std::string::npos);
  CHECK(ja.find("fnv1a64:") != std::string::npos);
  CHECK(a.to_json(cfg) == b.to_json(cfg));
  for (const char* f : {"field.csv", "field.bin", "singular.csv", "singular.ndjson", "scene.svg"}) {
    CAPTURE(f);
    CHECK(fs::exists(fs::path(cfg.output_dir) / f));
  }
  const DistanceField back = field_from_binary(read_file(cfg.output_dir + "/field.bin"));
  CHECK(back.grid.h == doctest::Approx(0.02));
  CHECK(read_file(cfg.output_dir + "/scene.svg") ==
        read_file(dir_a + "/scene.svg"));
  CHECK(a.verdicts.at("eikonal_residual") == Verdict::pass);
  CHECK(a.verdicts.at("oracle_agreement") == Verdict::inconclusive);
}

TEST_CASE("exit status") {
  Report r;
  r.verdicts["x"] = Verdict::pass;
  r.verdicts["y"] = Verdict::inconclusive;
  CHECK(r.exit_status() == 0);
  r.verdicts["z"] = Verdict::fail;
  CHECK(r.any_fail());
  CHECK(r.exit_status() != 0);
  Report e;
  e.errors.push_back("solve: io: disk full");
  CHECK(e.exit_status() != 0);
}

TEST_CASE("check names") {
  const auto& names = check_names();
  CHECK(names.size() == 13);
  CHECK(names.front() == "oracle_agreement");
  CHECK(names.back() == "determinism_convergence");
}

TEST_CASE("svg rendering") {
  const Scene s = load_scene(scene_path("disk.json"));
  const DistanceField f = solve_isotropic_fmm(s, 0.05);
  const std::vector<std::uint8_t> empty(f.grid.size(), 0);
  SvgLayers layers;
  layers.field = &f;
  layers.singular = &empty;
  layers.polylines = {{{-2.0, 0.0}, {-1.0, 0.0}}};
  const std::string a = render_svg(s, layers);
  CHECK(a == render_svg(s, layers));
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(a.find("id=\"singular\"") == std::string::npos);
  CHECK(a.find("id=\"contours\"") != std::string::npos);

  SvgLayers bad;
  bad.singular = &empty;
  CHECK_THROWS_AS(render_svg(s, bad), Error);
  const std::vector<std::uint8_t> wrong(3, 0);
  layers.singular = &wrong;
  CHECK_THROWS_AS(render_svg(s, layers), Error);
}
