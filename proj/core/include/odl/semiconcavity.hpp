#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "odl/disk_oracle.hpp"
#include "odl/grid.hpp"
#include "odl/scene.hpp"
#include "odl/thresholds.hpp"

namespace odl {

/// Scalar field under test: a solved grid, the analytic disk distance, or
/// any closed-form function.
class FieldView {
 public:
  enum class Kind { grid, oracle, synthetic };

  /// Keeps a reference to `field`; it must outlive the view.
  static FieldView grid(const DistanceField& field, const Scene& scene);
  static FieldView oracle(const DiskScene& ds);
  static FieldView synthetic(std::function<double(Vec2)> fn);

  /// Same field multiplied by s > 0.
  FieldView scaled(double s) const;
  /// Marks grid nodes that belong to the singular set (grid views only).
  FieldView with_singular_mask(std::vector<std::uint8_t> mask) const;

  Kind kind() const { return kind_; }
  /// Grid spacing; 0 for analytic views.
  double resolution() const;
  /// Throws Error(domain) where the field has no finite value.
  double value(Vec2 x) const;
  /// No sample of [x, y] is inside the obstacle, and for grid views every
  /// sample has a finite value.
  bool segment_free(Vec2 x, Vec2 y) const;
  /// Smallest signed distance to the obstacle along [x, y]; +inf without one.
  double segment_clearance(Vec2 x, Vec2 y) const;
  /// True if some point of [x, y] is within r of the singular set.
  bool segment_near_singular(Vec2 x, Vec2 y, double r) const;
  /// Points within this radius of k0 are not evaluated.
  double source_radius() const { return source_radius_; }
  bool has_source() const { return has_k0_; }
  Vec2 k0() const { return k0_; }

 private:
  Kind kind_ = Kind::synthetic;
  const DistanceField* field_ = nullptr;
  DiskScene disk_{};
  std::function<double(Vec2)> fn_;
  Obstacle obstacle_ = Obstacle::none();
  std::vector<double> singular_;  // chamfer distance to the singular set, in cells
  double scale_ = 1.0;
  bool has_k0_ = false;
  Vec2 k0_{};
  double source_radius_ = 0.0;
};

struct DefectSample {
  Vec2 x;
  Vec2 y;
  double lambda = 0.5;
  double defect = 0.0;  // lambda u(x) + (1 - lambda) u(y) - u(lambda x + (1 - lambda) y)
  double separation = 0.0;
};

/// Throws Error(precondition) if [x, y] is not free or an endpoint lies in
/// the source ball, and for lambda outside [0, 1].
DefectSample sc_defect(const FieldView& view, Vec2 x, Vec2 y, double lambda);

enum class FitRegion { interior, boundary_S, boundary_I };
const char* to_string(FitRegion r);
/// Throws Error(parse) for unknown names.
FitRegion fit_region_from_string(const std::string& s);

struct FitOptions {
  std::size_t n_pairs = 4000;
  std::uint64_t seed = 1;
  /// Separation range; zero selects [4h, 40h] on grids and [1e-3, 1e-1]
  /// for analytic views.
  double s_min = 0.0;
  double s_max = 0.0;
  int n_bins = 12;
};

struct ExponentFit {
  FitRegion region = FitRegion::interior;
  double alpha_hat = 0.0;
  double C_hat = 0.0;
  double r2 = 0.0;
  std::size_t n_samples = 0;   // pairs evaluated
  std::size_t n_positive = 0;  // pairs with a positive envelope value
  std::size_t n_bins_used = 0;
  double s_min = 0.0;
  double s_max = 0.0;
  bool conclusive = false;  // r2 >= r2_min
};

/// Log-log fit of per-bin medians of max_lambda defect / (lambda (1 -
/// lambda)) against per-bin median separations, over log-spaced bins and
/// positive values only; the slope is 1 + alpha. Interior pairs
/// keep interior_collar cells from the obstacle, k0 and the singular set;
/// boundary pairs start on boundary points of the region and leave within
/// normal_cone_deg of the outward normal. Throws Error(precondition) when
/// fewer than half the requested pairs or fewer than 4 bins are usable.
ExponentFit fit_exponent(const FieldView& view, const Scene& scene, FitRegion region, const Thresholds& th,
                         const FitOptions& opt = {});

/// Least-squares line through (log x, log y); returns slope, intercept, r2.
struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct ExponentMap {
  Vec2 origin;     // centre of window (0, 0)
  double spacing = 0.0;
  int nx = 0;
  int ny = 0;
  double window = 0.0;
  std::vector<double> alpha;  // NaN where the local fit is unknown
  double at(int i, int j) const { return alpha[static_cast<std::size_t>(j * nx + i)]; }
};

/// Local fits in square windows centred every window/2. Throws
/// Error(precondition) when the window is below 8 cells.
ExponentMap exponent_map(const FieldView& view, const Scene& scene, double window, const Thresholds& th,
                         std::uint64_t seed = 1, std::size_t pairs_per_window = 96);

}  // namespace odl
