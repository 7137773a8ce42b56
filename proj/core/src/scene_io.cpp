#include "odl/scene_io.hpp"

#include <cmath>
#include <string>

#include <json.hpp>

#include "odl/errors.hpp"
#include "odl/field_io.hpp"

namespace odl {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& origin, const std::string& key, const std::string& what) {
  throw Error(ErrorCode::parse, origin + ": \"" + key + "\": " + what);
}

const json& member(const json& obj, const char* key, const std::string& path, const std::string& origin) {
  if (!obj.is_object()) schema_error(origin, path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(origin, path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& path, const std::string& origin) {
  if (!v.is_number()) schema_error(origin, path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(origin, path, "must be finite");
  return d;
}

Vec2 point(const json& v, const std::string& path, const std::string& origin) {
  if (!v.is_array() || v.size() != 2) schema_error(origin, path, "expected [x, y]");
  return {number(v[0], path + "[0]", origin), number(v[1], path + "[1]", origin)};
}

Mat2 matrix(const json& v, const std::string& path, const std::string& origin) {
  if (!v.is_array() || v.size() != 2) schema_error(origin, path, "expected [[a11, a12], [a21, a22]]");
  const Vec2 r0 = point(v[0], path + "[0]", origin);
  const Vec2 r1 = point(v[1], path + "[1]", origin);
  return {r0.x, r0.y, r1.x, r1.y};
}

Circle circle(const json& v, const std::string& path, const std::string& origin) {
  return {point(member(v, "center", path, origin), path + ".center", origin),
          number(member(v, "radius", path, origin), path + ".radius", origin)};
}

std::string kind_of(const json& v, const std::string& path, const std::string& origin) {
  const json& k = member(v, "kind", path, origin);
  if (!k.is_string()) schema_error(origin, path + ".kind", "expected a string");
  return k.get<std::string>();
}

Obstacle parse_obstacle(const json& v, const std::string& origin) {
  const std::string kind = kind_of(v, "obstacle", origin);
  if (kind == "none") return Obstacle::none();
  if (kind == "disk") {
    const Circle c = circle(v, "obstacle", origin);
    if (!(c.radius > 0.0)) schema_error(origin, "obstacle.radius", "must be positive");
    return Obstacle::disk(c.center, c.radius);
  }
  if (kind == "ellipse") {
    const Vec2 c = point(member(v, "center", "obstacle", origin), "obstacle.center", origin);
    const Vec2 ax = point(member(v, "semi_axes", "obstacle", origin), "obstacle.semi_axes", origin);
    if (!(ax.x > 0.0 && ax.y > 0.0)) schema_error(origin, "obstacle.semi_axes", "must be positive");
    return Obstacle::ellipse(c, ax.x, ax.y);
  }
  if (kind == "crescent") {
    const Circle outer = circle(member(v, "outer", "obstacle", origin), "obstacle.outer", origin);
    const Circle inner = circle(member(v, "inner", "obstacle", origin), "obstacle.inner", origin);
    return Obstacle::crescent(outer, inner);
  }
  schema_error(origin, "obstacle.kind", "unknown kind \"" + kind + "\"");
}

Metric parse_metric(const json& root, const std::string& origin) {
  const auto it = root.find("metric");
  if (it == root.end()) return Metric::identity();
  const json& v = *it;
  const std::string kind = kind_of(v, "metric", origin);
  if (kind == "identity") return Metric::identity();
  if (kind == "isotropic") {
    if (v.contains("a")) return Metric::isotropic(number(v["a"], "metric.a", origin));
    const double a0 = number(member(v, "a0", "metric", origin), "metric.a0", origin);
    const Vec2 slope = v.contains("slope") ? point(v["slope"], "metric.slope", origin) : Vec2{};
    return Metric::isotropic_affine(a0, slope);
  }
  if (kind == "matrix") {
    if (v.contains("A")) return Metric::constant(matrix(v["A"], "metric.A", origin));
    const Mat2 inv = matrix(member(v, "A_inv", "metric", origin), "metric.A_inv", origin);
    if (!(std::abs(inv.det()) > 0.0)) schema_error(origin, "metric.A_inv", "singular matrix");
    return Metric::constant(inv.inverse());
  }
  schema_error(origin, "metric.kind", "unknown kind \"" + kind + "\"");
}

json to_json(Vec2 p) { return json::array({p.x, p.y}); }
json to_json(Circle c) { return {{"center", to_json(c.center)}, {"radius", c.radius}}; }

}  // namespace

Scene scene_from_json(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::parse,
                origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
  if (!root.is_object()) schema_error(origin, "", "scene must be a JSON object");

  const Obstacle obstacle = parse_obstacle(member(root, "obstacle", "", origin), origin);
  const Vec2 k0 = point(member(root, "k0", "", origin), "k0", origin);
  const json& bb = member(root, "bbox", "", origin);
  if (!bb.is_array() || bb.size() != 2) schema_error(origin, "bbox", "expected [[xmin, ymin], [xmax, ymax]]");
  const Box box{point(bb[0], "bbox[0]", origin), point(bb[1], "bbox[1]", origin)};
  Metric metric = parse_metric(root, origin);
  try {
    return Scene(obstacle, k0, std::move(metric), box);
  } catch (const Error& e) {
    throw Error(e.code(), origin + ": " + e.what());
  }
}

Scene load_scene(const std::string& path) { return scene_from_json(read_file(path), path); }

std::string scene_to_json(const Scene& scene) {
  json root;
  const Obstacle& o = scene.obstacle();
  switch (o.kind()) {
    case Obstacle::Kind::none: root["obstacle"] = {{"kind", "none"}}; break;
    case Obstacle::Kind::disk:
      root["obstacle"] = to_json(o.outer_circle());
      root["obstacle"]["kind"] = "disk";
      break;
    case Obstacle::Kind::ellipse:
      root["obstacle"] = {{"kind", "ellipse"}, {"center", to_json(o.center())}, {"semi_axes", to_json(o.semi_axes())}};
      break;
    case Obstacle::Kind::crescent:
      root["obstacle"] = {
          {"kind", "crescent"}, {"outer", to_json(o.outer_circle())}, {"inner", to_json(o.inner_circle())}};
      break;
    case Obstacle::Kind::custom: throw Error(ErrorCode::unsupported, "custom obstacles have no file form");
  }
  root["k0"] = to_json(scene.k0());
  const Metric& m = scene.metric();
  if (!m.closed_form()) throw Error(ErrorCode::unsupported, "function-valued metrics have no file form");
  switch (m.kind()) {
    case Metric::Kind::identity: root["metric"] = {{"kind", "identity"}}; break;
    case Metric::Kind::isotropic:
      root["metric"] = {{"kind", "isotropic"}, {"a0", m.a0()}, {"slope", to_json(m.slope())}};
      break;
    case Metric::Kind::matrix: {
      const Mat2 a = m.matrix();
      root["metric"] = {{"kind", "matrix"}, {"A", json::array({json::array({a.a11, a.a12}), json::array({a.a21, a.a22})})}};
      break;
    }
  }
  root["bbox"] = json::array({to_json(scene.bbox().lo), to_json(scene.bbox().hi)});
  return root.dump(2) + "\n";
}

}  // namespace odl
