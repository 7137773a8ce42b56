#include "odl/metric.hpp"

#include <cstdio>
#include <utility>

#include "odl/errors.hpp"

namespace odl {

Metric Metric::identity() { return Metric{}; }

Metric Metric::isotropic(double a) {
  if (!(a > 0.0)) throw Error(ErrorCode::domain, "isotropic metric factor must be positive");
  Metric m;
  m.kind_ = Kind::isotropic;
  m.a0_ = a;
  return m;
}

Metric Metric::isotropic_affine(double a0, Vec2 slope) {
  Metric m;
  m.kind_ = Kind::isotropic;
  m.a0_ = a0;
  m.slope_ = slope;
  m.constant_ = slope.x == 0.0 && slope.y == 0.0;
  return m;
}

Metric Metric::isotropic_field(std::function<double(Vec2)> a) {
  Metric m;
  m.kind_ = Kind::isotropic;
  m.constant_ = false;
  m.a_fn_ = std::move(a);
  return m;
}

Metric Metric::constant(Mat2 a) {
  Metric m;
  m.kind_ = Kind::matrix;
  m.m_ = a;
  m.check_spd({});
  return m;
}

Metric Metric::matrix_field(std::function<Mat2(Vec2)> a) {
  Metric m;
  m.kind_ = Kind::matrix;
  m.constant_ = false;
  m.m_fn_ = std::move(a);
  return m;
}

double Metric::scale(Vec2 x) const {
  switch (kind_) {
    case Kind::identity: return 1.0;
    case Kind::isotropic: return a_fn_ ? a_fn_(x) : a0_ + dot(slope_, x);
    case Kind::matrix: break;
  }
  throw Error(ErrorCode::unsupported, "scale() requires an isotropic metric");
}

Mat2 Metric::A(Vec2 x) const {
  switch (kind_) {
    case Kind::identity: return Mat2::identity();
    case Kind::isotropic: return Mat2::scaled(scale(x));
    case Kind::matrix: return m_fn_ ? m_fn_(x) : m_;
  }
  return Mat2::identity();
}

Mat2 Metric::A_inv(Vec2 x) const {
  switch (kind_) {
    case Kind::identity: return Mat2::identity();
    case Kind::isotropic: return Mat2::scaled(1.0 / scale(x));
    case Kind::matrix: return A(x).inverse();
  }
  return Mat2::identity();
}

double Metric::segment_length(Vec2 p, Vec2 q) const {
  const Vec2 d = q - p;
  switch (kind_) {
    case Kind::identity: return norm(d);
    case Kind::isotropic: return std::sqrt(scale(0.5 * (p + q))) * norm(d);
    case Kind::matrix: return std::sqrt(std::max(0.0, A(0.5 * (p + q)).quad(d)));
  }
  return norm(d);
}

double Metric::dual_norm2(Vec2 x, Vec2 g) const {
  switch (kind_) {
    case Kind::identity: return norm2(g);
    case Kind::isotropic: return norm2(g) / scale(x);
    case Kind::matrix: return A_inv(x).quad(g);
  }
  return norm2(g);
}

double Metric::anisotropy(Vec2 x) const {
  if (is_isotropic()) return 1.0;
  const auto ev = A(x).eigenvalues();
  return ev[1] / ev[0];
}

void Metric::check_spd(Vec2 x) const {
  const Mat2 a = A(x);
  const double tol = 1e-12 * std::max(1.0, std::abs(a.a11) + std::abs(a.a22));
  if (!a.is_symmetric(tol)) throw Error(ErrorCode::domain, "metric matrix is not symmetric");
  const auto ev = a.eigenvalues();
  if (!(ev[0] > 0.0) || !std::isfinite(ev[1])) {
    throw Error(ErrorCode::domain, "metric matrix is not positive definite");
  }
}

std::string Metric::describe() const {
  char buf[160];
  switch (kind_) {
    case Kind::identity: return "identity";
    case Kind::isotropic:
      if (a_fn_) return "isotropic(field)";
      std::snprintf(buf, sizeof buf, "isotropic(a=%.17g, slope=[%.17g, %.17g])", a0_, slope_.x,
                    slope_.y);
      return buf;
    case Kind::matrix:
      if (m_fn_) return "matrix(field)";
      std::snprintf(buf, sizeof buf, "matrix(A=[[%.17g, %.17g], [%.17g, %.17g]])", m_.a11, m_.a12,
                    m_.a21, m_.a22);
      return buf;
  }
  return "unknown";
}

}  // namespace odl
