#include "ctd/refframe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>

namespace ctd {

namespace {

struct Edge {
  ImageSegment seg;
  bool horizontal;
};

/// Fixed order: top, bottom, left, right.
std::array<Edge, 4> bbox_edges(const BBox& b) {
  return {Edge{{{b.u0, b.v0}, {b.u1, b.v0}}, true},
          Edge{{{b.u0, b.v1}, {b.u1, b.v1}}, true},
          Edge{{{b.u0, b.v0}, {b.u0, b.v1}}, false},
          Edge{{{b.u1, b.v0}, {b.u1, b.v1}}, false}};
}

bool bbox_squareish(const BBox& b) {
  return std::abs(b.width() - b.height()) < kSquareBBoxTolerancePx;
}

EdgeClass edge_class_of(const BBox& b, const Edge& e) {
  // Squares are canonically recorded as Longer; prediction ignores the
  // class for them anyway.
  if (bbox_squareish(b)) {
    return EdgeClass::Longer;
  }
  const bool horizontal_longer = b.width() > b.height();
  return e.horizontal == horizontal_longer ? EdgeClass::Longer
                                           : EdgeClass::Shorter;
}

/// Acute angle between two image directions, lines not rays.
double line_angle(const Vec2& a, const Vec2& b) {
  const double denom = a.norm() * b.norm();
  if (denom <= 0.0) {
    return 0.0;
  }
  const double c = std::clamp(std::abs(a.dot(b)) / denom, 0.0, 1.0);
  return std::acos(c);
}

double point_line_distance(const Vec2& p, const ImageSegment& seg) {
  const Vec2 d = seg.b - seg.a;
  const double len = d.norm();
  if (len <= 0.0) {
    return (p - seg.a).norm();
  }
  const Vec2 n(-d.y() / len, d.x() / len);
  return std::abs((p - seg.a).dot(n));
}

}  // namespace

const char* edge_class_name(EdgeClass c) {
  return c == EdgeClass::Longer ? "longer" : "shorter";
}

std::optional<EdgeClass> edge_class_from_name(const std::string& name) {
  if (name == "longer") return EdgeClass::Longer;
  if (name == "shorter") return EdgeClass::Shorter;
  return std::nullopt;
}

RefFrameRule classify_axis_edge(const RevoluteParams& model, const BBox& bbox,
                                const PixelDepth& grasp_px,
                                const Intrinsics& k) {
  if (!bbox.valid()) {
    throw Error(Errc::InvalidSpec, "bounding box is empty");
  }
  // Two points of the 3D axis; the center always lies on it.
  constexpr double kAxisStep = 0.1;  // meters
  const Vec3 a3 = model.center;
  Vec3 b3 = model.center + kAxisStep * model.axis;
  if (!(a3.z() > 0.0)) {
    throw Error(Errc::ProjectionDegenerate, "rotation center behind camera");
  }
  if (!(b3.z() > 0.0)) {
    b3 = model.center - kAxisStep * model.axis;
  }
  if (!(b3.z() > 0.0)) {
    throw Error(Errc::ProjectionDegenerate, "axis leaves the camera frustum");
  }
  const PixelDepth a_px = project(a3, k);
  const PixelDepth b_px = project(b3, k);
  const Vec2 a(a_px.u, a_px.v);
  const Vec2 b(b_px.u, b_px.v);
  if ((b - a).norm() < 1.0) {
    throw Error(Errc::ProjectionDegenerate, "axis is viewed end-on");
  }
  const Vec2 axis_dir = b - a;
  const Vec2 grasp(grasp_px.u, grasp_px.v);

  const auto edges = bbox_edges(bbox);
  int best = -1;
  double best_angle = 0.0;
  double best_dist = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Vec2 edge_dir = edges[i].seg.b - edges[i].seg.a;
    const double angle = line_angle(axis_dir, edge_dir);
    const double dist = (edges[i].seg.midpoint() - grasp).norm();
    if (best < 0 || angle < best_angle - 1e-9 ||
        (angle <= best_angle + 1e-9 && dist > best_dist)) {
      best = i;
      best_angle = angle;
      best_dist = dist;
    }
  }

  RefFrameRule rule;
  rule.model_class = ModelClass::Revolute;
  rule.edge_class = edge_class_of(bbox, edges[best]);
  const double diag = std::hypot(bbox.width(), bbox.height());
  rule.grasp_axis_dist_norm =
      diag > 0.0 ? point_line_distance(grasp, ImageSegment{a, b}) / diag : 0.0;
  return rule;
}

ImageSegment predict_axis(const RefFrameRule& rule, const BBox& bbox,
                          const PixelDepth& grasp_px) {
  if (rule.model_class != ModelClass::Revolute) {
    throw Error(Errc::InvalidSpec, "axis prediction needs a revolute rule");
  }
  if (!bbox.valid()) {
    throw Error(Errc::InvalidSpec, "bounding box is empty");
  }
  const Vec2 grasp(grasp_px.u, grasp_px.v);
  const auto edges = bbox_edges(bbox);
  const bool square = bbox_squareish(bbox);
  int best = -1;
  double best_dist = -1.0;
  for (int i = 0; i < 4; ++i) {
    if (!square && edge_class_of(bbox, edges[i]) != rule.edge_class) {
      continue;
    }
    const double dist = (edges[i].seg.midpoint() - grasp).norm();
    if (dist > best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  return edges[best].seg;
}

Vec2 predict_center_px(const ImageSegment& axis_seg,
                       const PixelDepth& grasp_px) {
  if (axis_seg.length() <= 0.0) {
    throw Error(Errc::InvalidSpec, "degenerate axis segment");
  }
  return project_point_to_segment(Vec2(grasp_px.u, grasp_px.v), axis_seg);
}

ReferenceFrame build_frame(ModelClass model_class, const Vec3& center3,
                           const Vec3& axis3, const Vec3& surface_normal,
                           const Vec3& grasp3) {
  // Unit input stays bit-exact: Y is an assignment, not an estimate.
  Vec3 y = axis3;
  if (std::abs(y.squaredNorm() - 1.0) > 1e-12) {
    y.normalize();
  }
  const Vec3 n = surface_normal.normalized();
  if (std::abs(y.dot(n)) >= 1.0 - 1e-6) {
    throw Error(Errc::ParallelNormal,
                "surface normal is parallel to the joint axis");
  }
  const Vec3 z = (n - n.dot(y) * y).normalized();
  const Vec3 x = y.cross(z);

  ReferenceFrame frame;
  frame.origin = model_class == ModelClass::Prismatic ? grasp3 : center3;
  frame.basis.col(0) = x;
  frame.basis.col(1) = y;
  frame.basis.col(2) = z;
  return frame;
}

Vec3 estimate_surface_normal(const std::vector<PixelDepth>& depth_patch,
                             const Intrinsics& k) {
  std::vector<Vec3> pts;
  pts.reserve(depth_patch.size());
  for (const PixelDepth& s : depth_patch) {
    if (s.has_depth()) {
      pts.push_back(deproject(s, k));
    }
  }
  if (pts.size() < 3) {
    throw Error(Errc::DegeneratePatch,
                "surface patch has fewer than 3 valid depths");
  }
  Vec3 mean = Vec3::Zero();
  for (const Vec3& p : pts) {
    mean += p;
  }
  mean /= static_cast<double>(pts.size());
  Mat3 scatter = Mat3::Zero();
  for (const Vec3& p : pts) {
    const Vec3 d = p - mean;
    scatter += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);
  const double lam1 = eig.eigenvalues()(1);
  const double lam2 = eig.eigenvalues()(2);
  if (lam2 <= 1e-20 || lam1 <= 1e-12 * lam2) {
    throw Error(Errc::DegeneratePatch, "surface patch is collinear");
  }
  Vec3 normal = eig.eigenvectors().col(0);
  if (normal.z() > 0.0) {
    normal = -normal;
  }
  return normal;
}

}  // namespace ctd
