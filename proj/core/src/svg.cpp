#include "odl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "odl/errors.hpp"

namespace odl {
namespace {

struct Frame {
  Box box;
  double scale = 1.0;
  int width = 0;
  int height = 0;

  double px(double x) const { return (x - box.lo.x) * scale; }
  double py(double y) const { return (box.hi.y - y) * scale; }
};

void append_point(std::string& out, const Frame& f, Vec2 p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f,%.2f", f.px(p.x), f.py(p.y));
  out += buf;
}

// Crossing of `level` on the edge a -> b, linear in the values.
Vec2 crossing(Vec2 a, Vec2 b, double va, double vb, double level) {
  const double t = (level - va) / (vb - va);
  return a + t * (b - a);
}

std::string contour_path(const DistanceField& field, double level, int stride, const Frame& f) {
  const Grid& g = field.grid;
  std::string d;
  for (int j = 0; j + stride < g.ny; j += stride) {
    for (int i = 0; i + stride < g.nx; i += stride) {
      const int is[4] = {i, i + stride, i + stride, i};
      const int js[4] = {j, j, j + stride, j + stride};
      double v[4];
      Vec2 p[4];
      bool ok = true;
      for (int k = 0; k < 4; ++k) {
        v[k] = field.at(is[k], js[k]);
        p[k] = g.point(is[k], js[k]);
        ok = ok && std::isfinite(v[k]);
      }
      if (!ok) continue;
      Vec2 hits[4];
      int n = 0;
      for (int k = 0; k < 4; ++k) {
        const int l = (k + 1) % 4;
        if ((v[k] < level) != (v[l] < level)) hits[n++] = crossing(p[k], p[l], v[k], v[l], level);
      }
      // Saddles (four crossings) are split by pairing consecutive edges.
      for (int k = 0; k + 1 < n; k += 2) {
        d += 'M';
        append_point(d, f, hits[k]);
        d += 'L';
        append_point(d, f, hits[k + 1]);
      }
    }
  }
  return d;
}

}  // namespace

std::string render_svg(const Scene& scene, const SvgLayers& layers, const SvgStyle& style) {
  if (layers.singular && !layers.field) throw Error(ErrorCode::precondition, "singular mask needs its field");
  if (layers.singular && layers.singular->size() != layers.field->grid.size()) {
    throw Error(ErrorCode::precondition, "singular mask does not match the field grid");
  }
  if (style.width_px < 16) throw Error(ErrorCode::precondition, "svg width too small");
  Frame f;
  f.box = scene.bbox();
  f.scale = style.width_px / f.box.width();
  f.width = style.width_px;
  f.height = static_cast<int>(std::lround(f.box.height() * f.scale));

  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                f.width, f.height, f.width, f.height);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const Obstacle& obs = scene.obstacle();
  if (!obs.empty()) {
    out += "<g id=\"obstacle\"><polygon fill=\"#555555\" points=\"";
    const std::vector<Vec2> pts = obs.boundary_samples(720);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k) out += ' ';
      append_point(out, f, pts[k]);
    }
    out += "\"/></g>\n";
  }

  if (layers.field) {
    const DistanceField& field = *layers.field;
    std::vector<double> levels = style.levels;
    if (levels.empty()) {
      double vmax = 0.0;
      for (double v : field.values) {
        if (std::isfinite(v)) vmax = std::max(vmax, v);
      }
      for (double l = 0.5; l < vmax; l += 0.5) levels.push_back(l);
    }
    const int cells = std::max(field.grid.nx, field.grid.ny);
    const int stride = std::max(1, (cells + style.max_contour_cells - 1) / style.max_contour_cells);
    out += "<g id=\"contours\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.8\">\n";
    for (double level : levels) {
      const std::string d = contour_path(field, level, stride, f);
      if (d.empty()) continue;
      std::snprintf(buf, sizeof buf, "<path data-level=\"%.4f\" d=\"", level);
      out += buf;
      out += d;
      out += "\"/>\n";
    }
    out += "</g>\n";
  }

  if (layers.singular) {
    const Grid& g = layers.field->grid;
    std::string cells;
    const double side = std::max(1.0, g.h * f.scale);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      if (!(*layers.singular)[idx]) continue;
      const Vec2 p = g.point(idx);
      std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\"/>\n",
                    f.px(p.x) - 0.5 * side, f.py(p.y) - 0.5 * side, side, side);
      cells += buf;
    }
    if (!cells.empty()) out += "<g id=\"singular\" fill=\"#d62728\">\n" + cells + "</g>\n";
  }

  if (!layers.polylines.empty()) {
    out += "<g id=\"paths\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.5\">\n";
    for (const auto& line : layers.polylines) {
      if (line.size() < 2) continue;
      out += "<polyline points=\"";
      for (std::size_t k = 0; k < line.size(); ++k) {
        if (k) out += ' ';
        append_point(out, f, line[k]);
      }
      out += "\"/>\n";
    }
    out += "</g>\n";
  }

  std::snprintf(buf, sizeof buf, "<circle id=\"k0\" cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"#ff7f0e\"/>\n",
                f.px(scene.k0().x), f.py(scene.k0().y));
  out += buf;
  out += "</svg>\n";
  return out;
}

}  // namespace odl
