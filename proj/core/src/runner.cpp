#include "odl/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <set>

#include <json.hpp>

#include "odl/disk_oracle.hpp"
#include "odl/eikonal.hpp"
#include "odl/energy.hpp"
#include "odl/errors.hpp"
#include "odl/field_io.hpp"
#include "odl/minimizer.hpp"
#include "odl/random.hpp"
#include "odl/scene_io.hpp"
#include "odl/semiconcavity.hpp"
#include "odl/singularity.hpp"
#include "odl/svg.hpp"

namespace odl {
namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";
constexpr const char* kMetricConvention =
    "curve length is sqrt(<A x', x'>); the eikonal residual uses <A^-1 grad d, grad d>; scene files giving A_inv "
    "are inverted on load";

const std::vector<std::string> kCommands = {"solve", "oracle", "minimize", "singular",
                                            "flow",  "scscan", "report",   "render"};
const std::set<std::string> kFormats = {"csv", "bin", "ndjson", "svg"};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string num(double v) { return fmt("%.10g", v); }

std::optional<DiskScene> disk_of(const Scene& scene) {
  const auto c = scene.obstacle().as_disk();
  if (!c || !scene.metric().is_identity()) return std::nullopt;
  return DiskScene{c->center, c->radius, scene.k0()};
}

// Distance from p to the disk's two-minimizer ray.
double ray_distance(const DiskScene& ds, Vec2 p) {
  const Vec2 a = disk_shadow_axis(ds);
  const Vec2 start = ds.center + ds.R * a;
  const double t = std::max(0.0, dot(p - start, a));
  return distance(p, start + t * a);
}

class Session {
 public:
  Session(const ExperimentConfig& cfg, Scene scene, std::string scene_text)
      : cfg_(cfg), scene_(std::move(scene)), scene_text_(std::move(scene_text)), disk_(disk_of(scene_)) {
    for (const std::string& t : cfg_.thresholds) th_.set_from_string(t);
    for (const std::string& w : scene_.warnings()) report_.warnings.push_back("scene: " + w);
    report_.scene_json = scene_to_json(scene_);
    report_.thresholds = th_.entries();
    report_.conventions["metric"] = kMetricConvention;
    report_.conventions["involute"] = "not evaluated by the requested commands";
    for (const std::string& name : check_names()) {
      report_.verdicts[name] = Verdict::inconclusive;
      report_.notes[name] = "not evaluated by the requested commands";
    }
  }

  Report execute() {
    const std::set<std::string> want(cfg_.commands.begin(), cfg_.commands.end());
    const bool svg = has_format("svg");
    const std::vector<std::pair<std::string, std::function<void()>>> stages = {
        {"solve", [this] { cmd_solve(); }},
        {"oracle", [this] { cmd_oracle(); }},
        {"minimize", [this] { cmd_minimize(); }},
        {"singular", [this] { cmd_singular(); }},
        {"flow", [this] { cmd_flow(); }},
        {"scscan", [this] { cmd_scscan(); }},
        {"report", [this] { cmd_report(); }},
        {"render", [this] { cmd_render(); }},
    };
    for (const auto& [name, fn] : stages) {
      if (!want.count(name) && !(name == "render" && svg)) continue;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        fn();
      } catch (const Error& e) {
        report_.errors.push_back(name + ": " + e.what());
      } catch (const std::exception& e) {
        report_.errors.push_back(name + ": internal: " + e.what());
      }
      report_.timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    report_.config_hash = config_hash();
    report_.version = kVersion;
    if (want.count("report")) write("report.json", report_.to_json(cfg_));
    if (!report_.errors.empty()) write_manifest();
    return report_;
  }

 private:
  // ---- shared state, computed on first use ----

  const DistanceField& field() {
    if (!field_) {
      const auto t0 = std::chrono::steady_clock::now();
      SolveOptions so;
      so.init_radius_cells = th_.init_radius_cells;
      field_ = std::make_unique<DistanceField>(scene_.metric().is_isotropic() ? solve_isotropic_fmm(scene_, cfg_.h, so)
                                                                               : solve_anisotropic_graph(scene_, cfg_.h, so));
      solve_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      metric("solve.unreachable", static_cast<double>(field_->unreachable));
      metric("solve.monotonicity_violations", static_cast<double>(field_->monotonicity_violations));
      metric("solve.nodes", static_cast<double>(field_->grid.size()));
      if (field_->unreachable > 0) report_.warnings.push_back("solve: unreachable nodes present");
    }
    return *field_;
  }

  const SingularDetection& detection() {
    if (!detection_) {
      if (!scene_.metric().is_isotropic()) {
        throw Error(ErrorCode::unsupported, "singular detection needs an isotropic metric");
      }
      detection_ = std::make_unique<SingularDetection>(detect_singular_set(field(), scene_, th_));
      metric("singular.candidates", static_cast<double>(detection_->n_candidates));
      metric("singular.confirmed", static_cast<double>(detection_->n_confirmed));
    }
    return *detection_;
  }

  const std::vector<Vec2>& boundary_points() {
    if (!boundary_points_) {
      boundary_points_ = std::make_unique<std::vector<Vec2>>(
          scene_.obstacle().empty() ? std::vector<Vec2>{}
                                    : boundary_singular_points(field(), scene_, detection().confirmed, th_));
    }
    return *boundary_points_;
  }

  // ---- commands ----

  void cmd_solve() {
    const DistanceField& f = field();
    if (has_format("csv")) write("field.csv", field_to_csv(f));
    if (has_format("bin")) write("field.bin", field_to_binary(f));
    check_oracle_agreement();
    check_residual();
  }

  void cmd_oracle() {
    check_corollary();
    check_involute();
    if (!disk_) {
      report_.warnings.push_back("oracle: no closed form for this scene; oracle table skipped");
      return;
    }
    std::string csv = "x,y,d_oracle,n_minimizers,grads\n";
    const Box b = scene_.bbox();
    constexpr int n = 41;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const Vec2 p = b.lo + Vec2{b.width() * i / (n - 1), b.height() * j / (n - 1)};
        if (distance(p, disk_->center) <= disk_->R || distance(p, disk_->k0) == 0.0) continue;
        const auto grads = disk_reachable_gradients(*disk_, p);
        std::string g;
        for (std::size_t k = 0; k < grads.size(); ++k) {
          if (k) g += ';';
          g += num(grads[k].x) + " " + num(grads[k].y);
        }
        csv += num(p.x) + "," + num(p.y) + "," + num(disk_distance(*disk_, p)) + "," +
               std::to_string(disk_minimizers(*disk_, p).size()) + "," + g + "\n";
      }
    }
    write("oracle.csv", csv);
  }

  void cmd_minimize() {
    const DistanceField& f = field();
    const Box b = scene_.bbox();
    const Obstacle& o = scene_.obstacle();
    const Vec2 c = o.empty() ? 0.5 * (b.lo + b.hi) : 0.5 * (o.bounds().lo + o.bounds().hi);
    const double radius = 0.5 * (distance(c, o.empty() ? c : o.bounds().hi) + b.inner_margin(c));
    std::string nd;
    double worst_normal = 0.0, worst_curv = 0.0, worst_tau = 0.0;
    std::size_t traced = 0, failed = 0;
    for (int k = 0; k < 16; ++k) {
      const Vec2 x = c + radius * unit_at_angle(2.0 * kPi * k / 16.0);
      if (!b.contains(x) || (!o.empty() && o.signed_distance(x) < cfg_.h) ||
          distance(x, scene_.k0()) <= f.init_radius) {
        continue;
      }
      try {
        const MinimizerPath p = backtrace_minimizer(f, scene_, x);
        ++traced;
        worst_normal = std::max(worst_normal, contact_normal_component(scene_, p));
        worst_curv = std::max(worst_curv, p.max_curvature);
        if (disk_) {
          const double d = disk_distance(*disk_, x);
          worst_tau = std::max(worst_tau, std::abs(p.tau - d) / d);
        }
        json line;
        line["start"] = {x.x, x.y};
        line["tau"] = p.tau;
        line["n_points"] = p.points.size();
        json ci = json::array();
        for (const auto& [a, z] : p.contact_intervals) ci.push_back({a, z});
        line["contact_intervals"] = ci;
        json pts = json::array();
        for (const Vec2& q : p.points) pts.push_back({q.x, q.y});
        line["points"] = pts;
        nd += line.dump() + "\n";
        paths_.push_back(p.points);
      } catch (const Error& e) {
        ++failed;
        report_.warnings.push_back(std::string("minimize: start ") + fmt2("(%.4g, %.4g)", x.x, x.y) + ": " + e.what());
      }
    }
    write("paths.ndjson", nd);
    metric("minimize.paths", static_cast<double>(traced));
    metric("minimize.failed", static_cast<double>(failed));
    metric("minimize.max_contact_normal", worst_normal);
    metric("minimize.max_curvature", worst_curv);
    if (disk_) metric("minimize.max_tau_rel_error", worst_tau);
    check_energy();
  }

  void cmd_singular() {
    const SingularDetection& det = detection();
    const Grid& g = field().grid;
    if (has_format("csv") || !has_format("ndjson")) {
      std::string csv = "i,j,x,y\n";
      for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (!det.confirmed[idx]) continue;
        const Vec2 p = g.point(idx);
        csv += std::to_string(idx % g.nx) + "," + std::to_string(idx / g.nx) + "," + num(p.x) + "," + num(p.y) + "\n";
      }
      write("singular.csv", csv);
    }
    if (has_format("ndjson")) {
      std::string nd;
      for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (!det.confirmed[idx]) continue;
        const Vec2 p = g.point(idx);
        nd += json{{"i", idx % g.nx}, {"j", idx / g.nx}, {"x", p.x}, {"y", p.y}}.dump() + "\n";
      }
      write("singular.ndjson", nd);
    }
    check_exsing();
    check_orthogonality();
    check_local_propagation();
    check_no_critical();
  }

  void cmd_flow() {
    const DistanceField& f = field();
    detection();
    const double t_max = 2.0 * scene_.bbox().diameter();
    std::vector<std::pair<std::string, Vec2>> seeds;
    if (disk_) {
      const Vec2 a = disk_shadow_axis(*disk_);
      seeds.emplace_back("shadow", disk_->center + 2.0 * disk_->R * a);
      seeds.emplace_back("boundary", disk_->center + disk_->R * a);
    } else {
      for (const Vec2& p : boundary_points()) seeds.emplace_back("boundary", p);
    }
    std::string nd;
    std::size_t flagged = 0;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const SingularArc arc = integrate_singular_flow(f, scene_, seeds[k].second, t_max, th_);
      flagged += arc.flagged ? 1 : 0;
      for (const ArcSample& s : arc.samples) {
        nd += json{{"arc", k}, {"t", s.t}, {"x", s.x.x}, {"y", s.x.y}, {"d", s.d}, {"hull_dist", s.hull_dist}}.dump() +
              "\n";
      }
      if (arc.flagged) {
        report_.warnings.push_back("flow: arc " + std::to_string(k) + " flagged (" + arc.stop_reason + ")");
      }
      std::vector<Vec2> line;
      for (const ArcSample& s : arc.samples) line.push_back(s.x);
      paths_.push_back(std::move(line));
      arcs_.push_back(arc);
    }
    write("arcs.ndjson", nd);
    metric("flow.arcs", static_cast<double>(seeds.size()));
    metric("flow.flagged", static_cast<double>(flagged));
    if (disk_) {
      check_monotone_flow(arcs_.at(0));
      check_boundary_flow(arcs_.at(1));
    } else {
      note("t3ii_monotone", "needs the disk scene");
      note("t2_propagation", "needs the disk scene");
    }
  }

  void cmd_scscan() {
    const DistanceField& f = field();
    const bool has_obstacle = !scene_.obstacle().empty();
    FieldView grid_view = FieldView::grid(f, scene_);
    if (scene_.metric().is_isotropic()) grid_view = grid_view.with_singular_mask(detection().confirmed);
    FitOptions fo;
    fo.seed = cfg_.seed;

    json fits = json::array();
    std::vector<std::string> failures;
    bool all_r2 = true;
    auto record = [&](const char* mode, const ExponentFit& fit) {
      fits.push_back({{"mode", mode},
                      {"region", to_string(fit.region)},
                      {"alpha_hat", fit.alpha_hat},
                      {"C_hat", fit.C_hat},
                      {"r2", fit.r2},
                      {"n", fit.n_samples},
                      {"n_positive", fit.n_positive},
                      {"bins", fit.n_bins_used},
                      {"separations", {fit.s_min, fit.s_max}},
                      {"conclusive", fit.conclusive}});
      const std::string key = std::string("scscan.") + mode + "." + to_string(fit.region);
      metric(key + ".alpha_hat", fit.alpha_hat);
      metric(key + ".r2", fit.r2);
      all_r2 = all_r2 && fit.conclusive;
    };

    const ExponentFit interior = fit_exponent(grid_view, scene_, FitRegion::interior, th_, fo);
    record("grid", interior);
    if (interior.alpha_hat < 0.9) failures.push_back("grid interior alpha " + fmt("%.3f", interior.alpha_hat) + " < 0.9");
    if (has_obstacle) {
      for (FitRegion r : {FitRegion::boundary_S, FitRegion::boundary_I}) {
        try {
          const ExponentFit fit = fit_exponent(grid_view, scene_, r, th_, fo);
          record("grid", fit);
          if (disk_ && r == FitRegion::boundary_S && (fit.alpha_hat < 0.35 || fit.alpha_hat > 0.65)) {
            failures.push_back("grid boundary_S alpha " + fmt("%.3f", fit.alpha_hat) + " outside [0.35, 0.65]");
          }
        } catch (const Error& e) {
          report_.warnings.push_back(std::string("scscan: ") + to_string(r) + ": " + e.what());
          if (disk_ && r == FitRegion::boundary_S) failures.push_back(std::string("grid boundary_S: ") + e.what());
        }
      }
    }
    if (disk_) {
      const FieldView ov = FieldView::oracle(*disk_);
      FitOptions oo = fo;
      const ExponentFit fit = fit_exponent(ov, scene_, FitRegion::boundary_S, th_, oo);
      record("oracle", fit);
      if (fit.alpha_hat < 0.4 || fit.alpha_hat > 0.6) {
        failures.push_back("oracle boundary_S alpha " + fmt("%.3f", fit.alpha_hat) + " outside [0.4, 0.6]");
      }
    }
    if (!all_r2) failures.push_back("a fit has r2 below " + fmt("%.2f", th_.r2_min));
    write("fits.json", fits.dump(2) + "\n");

    const double window = std::max(8.0 * cfg_.h, 0.1 * std::min(scene_.bbox().width(), scene_.bbox().height()));
    const ExponentMap map = exponent_map(grid_view, scene_, window, th_, cfg_.seed);
    std::string csv = "i,j,x,y,alpha\n";
    std::size_t known = 0;
    for (int j = 0; j < map.ny; ++j) {
      for (int i = 0; i < map.nx; ++i) {
        const Vec2 c = map.origin + map.spacing * Vec2{static_cast<double>(i), static_cast<double>(j)};
        const double a = map.at(i, j);
        known += std::isfinite(a) ? 1 : 0;
        csv += std::to_string(i) + "," + std::to_string(j) + "," + num(c.x) + "," + num(c.y) + "," +
               (std::isfinite(a) ? num(a) : std::string("nan")) + "\n";
      }
    }
    write("exponent_map.csv", csv);
    metric("scscan.map_known_windows", static_cast<double>(known));

    if (!has_obstacle || disk_) {
      verdict("regularity_exponents", failures.empty(), failures.empty() ? "all fits in range" : join(failures));
    } else {
      // Boundary exponents of non-disk obstacles are reported without a verdict.
      if (!failures.empty()) {
        verdict("regularity_exponents", false, join(failures));
      } else {
        report_.verdicts["regularity_exponents"] = Verdict::inconclusive;
        note("regularity_exponents", "interior fit in range; boundary ranges are only asserted for the disk");
      }
    }
  }

  void cmd_report() {
    if (report_.notes["corollary_scan"].rfind("not evaluated", 0) == 0) check_corollary();
    if (report_.notes["involute_curvature"].rfind("not evaluated", 0) == 0) check_involute();
    check_convergence();
  }

  void cmd_render() {
    SvgLayers layers;
    if (field_) layers.field = field_.get();
    if (detection_) layers.singular = &detection_->confirmed;
    layers.polylines = paths_;
    write("scene.svg", render_svg(scene_, layers));
  }

  // ---- checks ----

  void check_oracle_agreement() {
    if (!disk_) return note("oracle_agreement", "needs the disk scene");
    const DistanceField& f = field();
    double worst = 0.0;
    for (std::size_t idx = 0; idx < f.grid.size(); ++idx) {
      if (f.grid.mask[idx] != CellType::free || !std::isfinite(f.values[idx])) continue;
      worst = std::max(worst, std::abs(f.values[idx] - disk_distance(*disk_, f.grid.point(idx))));
    }
    const Vec2 spot = disk_->center + 2.0 * disk_->R * disk_shadow_axis(*disk_);
    const double spot_err = std::abs(f.sample(spot) - disk_distance(*disk_, spot));
    oracle_error_ = worst;
    metric("oracle.max_abs_error", worst);
    metric("oracle.max_abs_error_cells", worst / cfg_.h);
    metric("oracle.spot_value", f.sample(spot));
    metric("oracle.spot_abs_error", spot_err);
    const double budget = 5.0 * cfg_.h;
    const bool fast = solve_seconds_ <= 60.0;
    verdict("oracle_agreement", worst <= budget && spot_err <= budget && fast,
            fmt2("max error %.3g h, spot error %.3g h", worst / cfg_.h, spot_err / cfg_.h) +
                (fast ? "" : ", solve exceeded 60 s"));
  }

  void check_residual() {
    const DistanceField& f = field();
    std::vector<std::uint8_t> mask(f.grid.size(), 0);
    if (scene_.metric().is_isotropic()) mask = detection().confirmed;
    const ResidualStats rs = eikonal_residual(f, scene_.metric(), residual_exclusion(f, scene_, mask, th_));
    metric("residual.median", rs.median);
    metric("residual.p95", rs.p95);
    metric("residual.max", rs.max);
    metric("residual.count", static_cast<double>(rs.count));
    verdict("eikonal_residual", rs.count > 0 && rs.median <= 0.05, fmt("median %.4g", rs.median));
  }

  void check_exsing() {
    if (scene_.obstacle().empty()) return note("t_exsing", "needs an obstacle");
    const HullSearch hs = hull_singularity_search(field(), scene_, detection().confirmed, th_);
    metric("t_exsing.hull_hits", static_cast<double>(hs.hits.size()));
    metric("t_exsing.argmax_x", hs.argmax.x);
    metric("t_exsing.argmax_y", hs.argmax.y);
    verdict("t_exsing", !hs.hits.empty(),
            std::to_string(hs.hits.size()) + " hull boundary samples within " + fmt("%.3g", th_.hull_hit_cells) +
                " cells of confirmed singular nodes");
  }

  void check_orthogonality() {
    if (scene_.obstacle().empty()) return note("np_orthogonality", "needs an obstacle");
    const bool two_sided = scene_.obstacle().convex();
    const auto& pts = boundary_points();
    metric("np.boundary_points", static_cast<double>(pts.size()));
    if (pts.empty()) return verdict("np_orthogonality", false, "no boundary singular point detected");
    double worst = -std::numeric_limits<double>::infinity();
    for (const Vec2& p : pts) {
      const GradientSet gs = reachable_gradients_numeric(field(), scene_, p, th_);
      const Vec2 nu = scene_.obstacle().normal_at(p);
      for (const Vec2& r : gs.reachables) worst = std::max(worst, two_sided ? std::abs(dot(r, nu)) : dot(r, nu));
    }
    metric(two_sided ? "np.max_abs_p_dot_nu" : "np.max_p_dot_nu", worst);
    verdict("np_orthogonality", worst <= 0.05,
            std::string(two_sided ? "max |<p, nu>| " : "max <p, nu> ") + fmt("%.4g", worst));
  }

  void check_local_propagation() {
    if (scene_.obstacle().empty()) return note("t2nc_local", "needs an obstacle");
    if (scene_.obstacle().convex()) return note("t2nc_local", "asserted for nonconvex obstacles only");
    const auto& pts = boundary_points();
    if (pts.empty()) return verdict("t2nc_local", false, "no boundary singular point detected");
    bool ok = true;
    double min_extent = std::numeric_limits<double>::infinity();
    for (const Vec2& p : pts) {
      try {
        const PropagationProbe pr = local_propagation_probe(field(), scene_, detection().confirmed, p, 0.3, th_);
        ok = ok && !pr.chain.empty() && pr.chain_outside_obstacle && pr.leaves_x0;
        min_extent = std::min(min_extent, pr.chain_extent);
      } catch (const Error& e) {
        ok = false;
        report_.warnings.push_back(std::string("t2nc_local: ") + e.what());
      }
    }
    metric("t2nc.min_chain_extent", min_extent);
    verdict("t2nc_local", ok,
            std::to_string(pts.size()) + " boundary singular points, shortest chain " + fmt("%.3g", min_extent));
  }

  void check_no_critical() {
    const DistanceField& f = field();
    const Box b = scene_.bbox();
    const bool has_obstacle = !scene_.obstacle().empty();
    const ConvexHull2D hull = has_obstacle ? convex_hull_2d(scene_, 1024) : ConvexHull2D{};
    const double margin = (th_.probe_offset_cells + th_.probe_length_cells) * cfg_.h;
    const double src = std::max(th_.source_exclusion_cells * cfg_.h, f.init_radius);
    Rng rng(cfg_.seed);
    std::size_t n = 0, bad = 0;
    double min_p = std::numeric_limits<double>::infinity();
    for (std::size_t attempt = 0; attempt < 200000 && n < 500; ++attempt) {
      const Vec2 x{rng.uniform(b.lo.x, b.hi.x), rng.uniform(b.lo.y, b.hi.y)};
      if (b.inner_margin(x) < margin || distance(x, scene_.k0()) < src) continue;
      if (has_obstacle && hull.distance(x) <= margin) continue;
      try {
        const GradientSet gs = reachable_gradients_numeric(f, scene_, x, th_);
        const double p = norm(gs.min_norm_point);
        min_p = std::min(min_p, p);
        bad += p < th_.p_eps ? 1 : 0;
        ++n;
      } catch (const Error& e) {
        ++bad;
        ++n;
        report_.warnings.push_back(std::string("no_critical_points: ") + e.what());
      }
    }
    metric("critical.samples", static_cast<double>(n));
    metric("critical.min_norm", min_p);
    verdict("no_critical_points", n == 500 && bad == 0,
            std::to_string(n) + " points, " + std::to_string(bad) + " below p_eps, min |p| " + fmt("%.4g", min_p));
  }

  void check_monotone_flow(const SingularArc& arc) {
    const double h = cfg_.h;
    double worst_inc = std::numeric_limits<double>::infinity();
    double worst_hull = std::numeric_limits<double>::infinity();
    bool strict = true;
    for (std::size_t k = 1; k < arc.samples.size(); ++k) {
      const ArcSample& a = arc.samples[k - 1];
      const ArcSample& z = arc.samples[k];
      const double dt = z.t - a.t;
      strict = strict && z.d > a.d;
      worst_inc = std::min(worst_inc, (z.d - a.d) - (a.p_norm * a.p_norm - 0.05) * dt);
      worst_hull = std::min(worst_hull, z.hull_dist - a.hull_dist + 2.0 * h);
    }
    const bool reached = arc.stop_reason == "bbox_exit";
    metric("flow.shadow.samples", static_cast<double>(arc.samples.size()));
    metric("flow.shadow.min_increment_margin", worst_inc);
    metric("flow.shadow.min_hull_margin", worst_hull);
    const bool ok = arc.samples.size() > 1 && strict && worst_inc >= 0.0 && worst_hull >= 0.0 && reached;
    verdict("t3ii_monotone", ok,
            "stop " + arc.stop_reason + (strict ? ", d strictly increasing" : ", d not strictly increasing") +
                fmt(", increment margin %.3g", worst_inc));
  }

  void check_boundary_flow(const SingularArc& arc) {
    double worst = 0.0;
    for (const ArcSample& s : arc.samples) worst = std::max(worst, ray_distance(*disk_, s.x));
    const bool reached = arc.stop_reason == "bbox_exit";
    metric("flow.boundary.samples", static_cast<double>(arc.samples.size()));
    metric("flow.boundary.max_ray_distance_cells", worst / cfg_.h);
    verdict("t2_propagation", arc.boundary_seeded && !arc.samples.empty() && reached && worst <= 2.0 * cfg_.h,
            "stop " + arc.stop_reason + fmt(", max distance to the ray %.3g cells", worst / cfg_.h));
  }

  void check_energy() {
    if (!disk_) return note("energy_reformulation", "needs the disk scene");
    const DistanceField& f = field();
    const Box b = scene_.bbox();
    const double collar = 4.0 * cfg_.h;
    Rng rng(cfg_.seed);
    std::vector<Vec2> samples;
    for (std::size_t a = 0; a < 100000 && samples.size() < 20; ++a) {
      const Vec2 x{rng.uniform(b.lo.x, b.hi.x), rng.uniform(b.lo.y, b.hi.y)};
      if (b.inner_margin(x) < collar || scene_.obstacle().signed_distance(x) < collar) continue;
      if (classify_region(scene_, x) != Region::S) continue;
      samples.push_back(x);
    }
    const EnergyCheck ec = energy_distance_check(scene_, f, samples, 128, f.init_radius);
    const Vec2 spot = disk_->center + 2.0 * disk_->R * disk_shadow_axis(*disk_);
    const double E = minimize_energy(scene_, spot, 128).E_value;
    const double d = disk_distance(*disk_, spot);
    const double spot_rel = std::abs(E - d * d) / (d * d);
    metric("energy.max_rel_gap", ec.max_rel_gap);
    metric("energy.evaluated", static_cast<double>(ec.evaluated));
    metric("energy.spot_E", E);
    metric("energy.spot_rel_error", spot_rel);
    verdict("energy_reformulation", ec.evaluated == 20 && ec.max_rel_gap <= 0.03 && spot_rel <= 0.02,
            fmt2("max |sqrt(E) - d| / d %.3g over shadow samples, E at the spot %.6g", ec.max_rel_gap, E));
  }

  void check_corollary() {
    const CorollaryScan scan = corollary_defect_scan(DiskScene{{0.0, 0.0}, 1.0, {-2.0, 0.0}}, {0.5, 0.9},
                                                     {0.1, 0.05, 0.025, 0.0125});
    const CorollarySummary& half = scan.summary.at(0);
    const CorollarySummary& high = scan.summary.at(1);
    metric("corollary.slope_alpha_0.5", half.slope);
    metric("corollary.growth_slope_alpha_0.9", high.growth_slope);
    verdict("corollary_scan", half.bounded && high.growth_slope > 0.0,
            fmt2("slope %.3g at alpha 0.5, growth slope %.3g at alpha 0.9", half.slope, high.growth_slope));
  }

  void check_involute() {
    double worst = 0.0;
    for (double R : {1.0, 2.0}) {
      for (int k = 0; k <= 19; ++k) {
        const double r = 0.1 + 0.1 * k;
        const double exact = involute_curvature(R, r);
        worst = std::max(worst, std::abs(involute_curvature_fd(R, r) - exact) / exact);
      }
    }
    metric("involute.max_rel_error", worst);
    report_.conventions["involute"] = "c(r) = gamma(r) - r gamma'(r) with gamma(r) = R (cos r, sin r), r an angle; finite-difference "
                        "curvature matches 1/(R r) within " +
                        fmt("%.2g", worst) + " relative for r in [0.1, 2], R in {1, 2}";
    verdict("involute_curvature", worst <= 0.01, fmt("max relative error %.3g", worst));
  }

  void check_convergence() {
    if (!disk_) return note("determinism_convergence", "needs the disk scene");
    if (oracle_error_ < 0.0) check_oracle_agreement();
    SolveOptions so;
    so.init_radius_cells = th_.init_radius_cells;
    const DistanceField coarse = solve_isotropic_fmm(scene_, 2.0 * cfg_.h, so);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < coarse.grid.size(); ++idx) {
      if (coarse.grid.mask[idx] != CellType::free || !std::isfinite(coarse.values[idx])) continue;
      worst = std::max(worst, std::abs(coarse.values[idx] - disk_distance(*disk_, coarse.grid.point(idx))));
    }
    const DistanceField again = solve_isotropic_fmm(scene_, cfg_.h, so);
    const bool identical = field_to_binary(again) == field_to_binary(field());
    const double ratio = worst / oracle_error_;
    metric("convergence.coarse_max_abs_error", worst);
    metric("convergence.ratio", ratio);
    verdict("determinism_convergence", identical && ratio >= 1.5 && ratio <= 3.0,
            fmt("error ratio %.3g for h -> h/2", ratio) + (identical ? ", re-solve bit-identical" : ", re-solve differs"));
  }

  // ---- plumbing ----

  void verdict(const std::string& name, bool pass, const std::string& detail) {
    report_.verdicts[name] = pass ? Verdict::pass : Verdict::fail;
    report_.notes[name] = detail;
  }
  void note(const std::string& name, const std::string& detail) {
    report_.verdicts[name] = Verdict::inconclusive;
    report_.notes[name] = detail;
  }
  void metric(const std::string& key, double v) { report_.metrics[key] = v; }

  static std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
    return s;
  }

  bool has_format(const std::string& f) const {
    return std::find(cfg_.formats.begin(), cfg_.formats.end(), f) != cfg_.formats.end();
  }

  void write(const std::string& name, const std::string& contents) {
    write_file_atomic((std::filesystem::path(cfg_.output_dir) / name).string(), contents);
    if (std::find(report_.files.begin(), report_.files.end(), name) == report_.files.end()) {
      report_.files.push_back(name);
    }
  }

  void write_manifest() {
    json m;
    m["schema"] = "odl-errors/1";
    m["errors"] = report_.errors;
    m["completed_files"] = report_.files;
    write_file_atomic((std::filesystem::path(cfg_.output_dir) / "errors.json").string(), m.dump(2) + "\n");
  }

  std::string config_hash() const {
    std::string canon = scene_text_;
    canon += "\nh=" + fmt("%.17g", cfg_.h) + "\nseed=" + std::to_string(cfg_.seed) + "\ncommands=";
    for (const auto& c : cfg_.commands) canon += c + ",";
    canon += "\nformats=";
    for (const auto& f : cfg_.formats) canon += f + ",";
    for (const auto& [k, v] : th_.entries()) canon += "\n" + k + "=" + fmt("%.17g", v);
    return fnv1a_hex(canon);
  }

 private:
  const ExperimentConfig& cfg_;
  Scene scene_;
  std::string scene_text_;
  std::optional<DiskScene> disk_;
  Thresholds th_;
  Report report_;
  std::unique_ptr<DistanceField> field_;
  std::unique_ptr<SingularDetection> detection_;
  std::unique_ptr<std::vector<Vec2>> boundary_points_;
  std::vector<std::vector<Vec2>> paths_;
  std::vector<SingularArc> arcs_;
  double solve_seconds_ = 0.0;
  double oracle_error_ = -1.0;
};

void validate(const ExperimentConfig& cfg) {
  if (!(cfg.h >= 1e-4 && cfg.h <= 0.1)) throw Error(ErrorCode::precondition, "resolution must lie in [1e-4, 0.1]");
  if (cfg.commands.empty()) throw Error(ErrorCode::precondition, "no commands given");
  for (const auto& c : cfg.commands) {
    if (std::find(kCommands.begin(), kCommands.end(), c) == kCommands.end()) {
      throw Error(ErrorCode::parse, "unknown command \"" + c + "\"");
    }
  }
  for (const auto& f : cfg.formats) {
    if (!kFormats.count(f)) throw Error(ErrorCode::parse, "unknown format \"" + f + "\"");
  }
  if (cfg.output_dir.empty()) throw Error(ErrorCode::precondition, "output directory required");
  Thresholds probe;
  for (const auto& t : cfg.thresholds) probe.set_from_string(t);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "oracle_agreement",     "eikonal_residual", "t_exsing",           "t3ii_monotone",      "t2_propagation",
      "t2nc_local",           "regularity_exponents", "corollary_scan", "np_orthogonality",   "energy_reformulation",
      "involute_curvature",   "no_critical_points",   "determinism_convergence"};
  return names;
}

bool Report::any_fail() const {
  for (const auto& [k, v] : verdicts) {
    if (v == Verdict::fail) return true;
  }
  return false;
}

int Report::exit_status() const { return any_fail() || !errors.empty() ? 1 : 0; }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string Report::to_json(const ExperimentConfig& config) const {
  json j;
  j["schema"] = "odl-report/1";
  json prov;
  prov["version"] = version;
  prov["config_hash"] = "fnv1a64:" + config_hash;
  prov["resolution"] = config.h;
  prov["seed"] = config.seed;
  prov["commands"] = config.commands;
  prov["formats"] = config.formats;
  prov["scene"] = json::parse(scene_json, nullptr, false);
  json th = json::object();
  for (const auto& [k, val] : thresholds) th[k] = val;
  prov["thresholds"] = th;
  j["provenance"] = prov;
  json conv = json::object();
  for (const auto& [k, val] : conventions) conv[k] = val;
  j["conventions"] = conv;
  json v = json::object(), n = json::object();
  for (const auto& name : check_names()) {
    const auto vi = verdicts.find(name);
    v[name] = vi == verdicts.end() ? "inconclusive" : to_string(vi->second);
    const auto ni = notes.find(name);
    n[name] = ni == notes.end() ? "" : ni->second;
  }
  j["verdicts"] = v;
  j["notes"] = n;
  json m = json::object();
  for (const auto& [k, val] : metrics) m[k] = val;
  j["metrics"] = m;
  j["files"] = files;
  j["warnings"] = warnings;
  j["errors"] = errors;
  return j.dump(2) + "\n";
}

Report run(const ExperimentConfig& config) {
  validate(config);
  const std::string text = read_file(config.scene_path);
  Scene scene = scene_from_json(text, config.scene_path);
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + config.output_dir + ": " + ec.message());
  Session session(config, std::move(scene), text);
  return session.execute();
}

}  // namespace odl
