#include "ctd/geometry.hpp"

#include <cmath>

namespace ctd {

Vec3 canonical_sign(const Vec3& v, double eps) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v[i]) > eps) {
      return v[i] < 0.0 ? Vec3(-v) : v;
    }
  }
  return v;
}

Vec3 rotate_about_axis(const Vec3& p, const Vec3& center, const Vec3& axis,
                       double angle) {
  const Eigen::AngleAxisd rot(angle, axis);
  return center + rot * (p - center);
}

Vec2 project_point_to_segment(const Vec2& p, const ImageSegment& seg) {
  const Vec2 ab = seg.b - seg.a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) {
    return seg.a;
  }
  const double s = (p - seg.a).dot(ab) / len2;
  const double clamped = std::clamp(s, 0.0, 1.0);
  return seg.a + clamped * ab;
}

}  // namespace ctd
