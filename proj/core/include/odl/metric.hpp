#pragma once

#include <functional>
#include <string>

#include "odl/vec2.hpp"

namespace odl {

/// Field of symmetric positive-definite matrices A(x). The length of a
/// velocity v at x is sqrt(<A(x) v, v>); the matching eikonal Hamiltonian
/// uses A(x)^{-1}.
class Metric {
 public:
  enum class Kind { identity, isotropic, matrix };

  static Metric identity();
  /// A(x) = a I with constant a > 0.
  static Metric isotropic(double a);
  /// A(x) = (a0 + <slope, x>) I. Positivity is checked by Scene over its bbox.
  static Metric isotropic_affine(double a0, Vec2 slope);
  static Metric isotropic_field(std::function<double(Vec2)> a);
  static Metric constant(Mat2 a);
  static Metric matrix_field(std::function<Mat2(Vec2)> a);

  Kind kind() const { return kind_; }
  bool is_identity() const { return kind_ == Kind::identity; }
  bool is_isotropic() const { return kind_ != Kind::matrix; }
  bool is_constant() const { return constant_; }

  Mat2 A(Vec2 x) const;
  Mat2 A_inv(Vec2 x) const;
  /// Scalar factor a(x) for isotropic kinds (1 for identity).
  double scale(Vec2 x) const;

  /// Midpoint-rule metric length of the segment [p, q].
  double segment_length(Vec2 p, Vec2 q) const;
  /// <A^{-1}(x) g, g>, the eikonal Hamiltonian.
  double dual_norm2(Vec2 x, Vec2 g) const;

  /// Ratio of largest to smallest eigenvalue of A(x).
  double anisotropy(Vec2 x) const;
  /// Throws Error(domain) unless A(x) is symmetric positive definite.
  void check_spd(Vec2 x) const;

  /// False for metrics given by arbitrary callables; only closed-form
  /// metrics can be written back to a scene file.
  bool closed_form() const { return !a_fn_ && !m_fn_; }
  /// Parameters of closed-form kinds: a(x) = a0 + <slope, x>, or the
  /// constant matrix.
  double a0() const { return a0_; }
  Vec2 slope() const { return slope_; }
  Mat2 matrix() const { return m_; }

  /// Short label used in reports.
  std::string describe() const;

 private:
  Metric() = default;

  Kind kind_ = Kind::identity;
  bool constant_ = true;
  double a0_ = 1.0;
  Vec2 slope_{};
  Mat2 m_{};
  std::function<double(Vec2)> a_fn_;
  std::function<Mat2(Vec2)> m_fn_;
};

}  // namespace odl
