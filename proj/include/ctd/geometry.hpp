#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ctd {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Resolves the two-fold sign ambiguity of fitted directions: flips v so
/// that its first component with magnitude above `eps` is positive.
/// Null vectors are returned unchanged.
Vec3 canonical_sign(const Vec3& v, double eps = 1e-12);

/// Rotation followed by translation, p -> R*p + t. R is expected to be a
/// proper rotation (orthonormal, det +1).
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 rotate(const Vec3& v) const { return rotation * v; }

  bool is_identity() const {
    return rotation.isIdentity(0.0) && translation.isZero(0.0);
  }
};

/// Rodrigues rotation of `p` about the line (center, unit axis) by `angle`.
Vec3 rotate_about_axis(const Vec3& p, const Vec3& center, const Vec3& axis,
                       double angle);

/// 2D segment in pixel coordinates.
struct ImageSegment {
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();

  Vec2 midpoint() const { return 0.5 * (a + b); }
  double length() const { return (b - a).norm(); }
};

/// Perpendicular foot of `p` on the supporting line of `seg`, clamped to
/// the segment.
Vec2 project_point_to_segment(const Vec2& p, const ImageSegment& seg);

}  // namespace ctd
