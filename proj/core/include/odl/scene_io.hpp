#pragma once

#include <string>

#include "odl/scene.hpp"

namespace odl {

/// Scene file layout:
///
///   {"obstacle": {"kind": "disk", "center": [x, y], "radius": r},
///    "k0": [x, y],
///    "metric": {"kind": "identity"},
///    "bbox": [[xmin, ymin], [xmax, ymax]]}
///
/// Obstacle kinds: none, disk {center, radius}, ellipse {center,
/// semi_axes}, crescent {outer: {center, radius}, inner: {center, radius}}.
/// Metric kinds: identity, isotropic {a} or {a0, slope}, matrix {A} or
/// {A_inv} as [[a11, a12], [a21, a22]]; A_inv is inverted on load. A
/// missing "metric" means identity.
///
/// Throws Error(parse) with line and column for malformed JSON and with the
/// offending key for schema violations. `origin` prefixes messages.
Scene scene_from_json(const std::string& text, const std::string& origin = "<scene>");

/// Reads and parses a scene file; throws Error(io) if it cannot be read.
Scene load_scene(const std::string& path);

/// Canonical JSON for scenes built from the analytic kinds; throws
/// Error(unsupported) for custom obstacles and function-valued metrics.
std::string scene_to_json(const Scene& scene);

}  // namespace odl
