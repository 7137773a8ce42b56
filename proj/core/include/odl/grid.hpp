#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "odl/vec2.hpp"

namespace odl {

class Scene;

enum class CellType : std::uint8_t { free = 0, obstacle = 1, source = 2 };
enum class NodeStatus : std::uint8_t { far = 0, accepted = 1 };

/// Node lattice over the scene box: node (i, j) sits at origin + h (i, j).
/// A node is an obstacle node when phi < 0 there, and a source node when it
/// lies within the init radius of k0.
struct Grid {
  Vec2 origin;
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<CellType> mask;

  /// Throws Error(precondition) for h <= 0 or fewer than 8 nodes per axis.
  static Grid build(const Scene& scene, double h, double init_radius);

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  bool valid(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }
  Vec2 point(int i, int j) const { return origin + Vec2{h * i, h * j}; }
  Vec2 point(std::size_t idx) const {
    return point(static_cast<int>(idx % static_cast<std::size_t>(nx)),
                 static_cast<int>(idx / static_cast<std::size_t>(nx)));
  }
  CellType type(int i, int j) const { return mask[index(i, j)]; }
  Vec2 upper() const { return point(nx - 1, ny - 1); }

  /// Lower-left node of the cell containing x plus local coordinates in
  /// [0, 1]. Returns false when x is outside the lattice.
  bool locate(Vec2 x, int& i, int& j, double& fx, double& fy) const;
  /// Nearest node (clamped to the lattice).
  void nearest(Vec2 x, int& i, int& j) const;
};

/// Solved distance values on a Grid; +inf on obstacle and unreachable nodes.
struct DistanceField {
  Grid grid;
  std::vector<double> values;
  std::vector<NodeStatus> status;
  std::vector<std::uint32_t> order;  // acceptance order of non-source nodes
  Vec2 k0;
  double init_radius = 0.0;
  std::size_t unreachable = 0;
  std::size_t monotonicity_violations = 0;
  std::string solver;

  double at(int i, int j) const { return values[grid.index(i, j)]; }
  bool finite(int i, int j) const;

  /// Bilinear value; +inf if x is off the lattice or a corner is not finite.
  double sample(Vec2 x) const;
  /// Bilinear value over the finite corners only (weights renormalized);
  /// +inf if none is finite.
  double sample_available(Vec2 x) const;
  /// True if all four corners of the cell containing x are finite.
  bool sample_ok(Vec2 x) const;
};

}  // namespace odl
