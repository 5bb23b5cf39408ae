#include "ctd/generalize.hpp"

#include <algorithm>
#include <cmath>

namespace ctd {

namespace {

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double segment_distance(const Vec2& p, const ImageSegment& seg) {
  return (p - project_point_to_segment(p, seg)).norm();
}

/// Depth for deprojecting the predicted axis: median valid depth within a
/// pixel band around the edge, falling back to the whole patch and
/// finally to the grasp depth.
double edge_depth(const SceneAnnotation& scene, const ImageSegment& seg) {
  constexpr double kBandPx = 3.0;
  std::vector<double> near_edge;
  std::vector<double> all;
  for (const PixelDepth& s : scene.depth_patch) {
    if (!s.has_depth()) {
      continue;
    }
    all.push_back(s.d);
    if (segment_distance(Vec2(s.u, s.v), seg) <= kBandPx) {
      near_edge.push_back(s.d);
    }
  }
  if (!near_edge.empty()) {
    return median(std::move(near_edge));
  }
  if (!all.empty()) {
    return median(std::move(all));
  }
  return scene.grasp.d;
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

template <typename Fn>
auto staged(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), e.what(), stage);
  }
}

}  // namespace

std::vector<Waypoint> revolute_waypoints(const ReferenceFrame& frame,
                                         const Vec3& grasp3, double sweep,
                                         int n, double duration) {
  if (n < 2) {
    throw Error(Errc::InvalidSpec, "need at least 2 waypoints");
  }
  const Vec3 local = frame.to_local(grasp3);
  const double radius = std::hypot(local.x(), local.z());
  if (radius < 1e-6) {
    throw Error(Errc::GraspOnAxis, "grasp lies on the rotation axis");
  }
  std::vector<Waypoint> wps;
  wps.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(n - 1);
    const double angle = s * sweep;
    const double c = std::cos(angle);
    const double sn = std::sin(angle);
    // Right-handed rotation about the frame's Y axis.
    const Vec3 rotated(c * local.x() + sn * local.z(), local.y(),
                       -sn * local.x() + c * local.z());
    Waypoint wp;
    wp.t = s * duration;
    wp.position = j == 0 ? grasp3 : frame.to_world(rotated);
    wp.joint_value = angle;
    wps.push_back(wp);
  }
  return wps;
}

std::vector<Waypoint> prismatic_waypoints(const ReferenceFrame& frame,
                                          const Vec3& grasp3, double travel,
                                          int n, double duration) {
  if (n < 2) {
    throw Error(Errc::InvalidSpec, "need at least 2 waypoints");
  }
  std::vector<Waypoint> wps;
  wps.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(n - 1);
    const double offset = s * travel;
    Waypoint wp;
    wp.t = s * duration;
    wp.position = grasp3 + offset * frame.y_axis();
    wp.joint_value = offset;
    wps.push_back(wp);
  }
  return wps;
}

GeneralizationResult generalize(const GeneralizationRequest& req) {
  const TaskDescriptor& d = req.descriptor;
  const SceneAnnotation& scene = req.scene;
  if (!d.executable()) {
    throw Error(Errc::NonExecutableModel,
                "descriptor does not describe an executable motion",
                "descriptor");
  }
  if (req.n_waypoints < 2) {
    throw Error(Errc::InvalidSpec, "need at least 2 waypoints", "request");
  }
  const double sweep = req.sweep.value_or(d.provenance.swept_value);
  if (sweep == 0.0) {
    throw Error(Errc::InvalidSpec, "sweep must be nonzero", "request");
  }
  const double duration = req.duration_s.value_or(d.provenance.duration_s);
  if (duration < 0.0) {
    throw Error(Errc::InvalidSpec, "duration must be non-negative", "request");
  }
  if (!scene.grasp.has_depth()) {
    throw Error(Errc::ZeroDepth, "scene grasp has no depth", "grasp");
  }

  const Vec3 grasp3 =
      staged("grasp", [&] { return deproject(scene.grasp, scene.intrinsics); });
  const Vec3 normal = staged("surface_normal", [&] {
    return estimate_surface_normal(scene.depth_patch, scene.intrinsics);
  });

  GeneralizationResult result;
  GeneralizationReport& report = result.report;
  report.model_class = d.model_class;
  report.sweep_used = sweep;
  report.duration_used = duration;
  report.grasp_px = Vec2(scene.grasp.u, scene.grasp.v);

  ReferenceFrame frame;
  if (d.model_class == ModelClass::Revolute) {
    const ImageSegment axis_seg = staged("predict_axis", [&] {
      return predict_axis(*d.ref_rule, scene.bbox, scene.grasp);
    });
    const Vec2 center_px = staged("predict_center", [&] {
      return predict_center_px(axis_seg, scene.grasp);
    });
    const double depth = edge_depth(scene, axis_seg);
    report.axis_px = axis_seg;
    report.center_px = center_px;
    report.edge_depth = depth;
    const double diag = std::hypot(scene.bbox.width(), scene.bbox.height());
    report.grasp_axis_dist_norm_predicted =
        diag > 0.0 ? point_line_distance(report.grasp_px, axis_seg) / diag : 0.0;
    report.grasp_axis_dist_norm_demonstrated = d.ref_rule->grasp_axis_dist_norm;

    const auto [center3, axis3] = staged("deproject_axis", [&] {
      if (!(depth > 0.0)) {
        throw Error(Errc::ZeroDepth, "no valid depth along the predicted axis");
      }
      const Vec3 c = deproject({center_px.x(), center_px.y(), depth},
                               scene.intrinsics);
      const Vec3 a = deproject({axis_seg.a.x(), axis_seg.a.y(), depth},
                               scene.intrinsics);
      const Vec3 b = deproject({axis_seg.b.x(), axis_seg.b.y(), depth},
                               scene.intrinsics);
      const Vec3 dir = b - a;
      if (dir.norm() < 1e-9) {
        throw Error(Errc::ProjectionDegenerate, "predicted axis collapsed");
      }
      return std::make_pair(c, canonical_sign(dir.normalized()));
    });
    frame = staged("build_frame", [&] {
      return build_frame(ModelClass::Revolute, center3, axis3, normal, grasp3);
    });
    result.waypoints = staged("waypoints", [&] {
      return revolute_waypoints(frame, grasp3, sweep, req.n_waypoints,
                                duration);
    });
    const Vec3 local = frame.to_local(grasp3);
    report.predicted_radius_or_travel = std::hypot(local.x(), local.z());
  } else {
    const Vec3 axis3 = std::get<PrismaticParams>(d.model_params).direction;
    frame = staged("build_frame", [&] {
      return build_frame(ModelClass::Prismatic, Vec3::Zero(), axis3, normal,
                         grasp3);
    });
    result.waypoints = staged("waypoints", [&] {
      return prismatic_waypoints(frame, grasp3, sweep, req.n_waypoints,
                                 duration);
    });
    report.predicted_radius_or_travel = sweep;
  }

  // Overlay trace in camera pixels, before leaving the camera frame.
  for (const Waypoint& wp : result.waypoints) {
    if (wp.position.z() > 0.0) {
      const PixelDepth px = project(wp.position, scene.intrinsics);
      report.waypoint_px.emplace_back(px.u, px.v);
    }
  }

  const RigidTransform& world = req.world_from_camera;
  result.frame.origin = world.apply(frame.origin);
  result.frame.basis = world.rotation * frame.basis;
  for (Waypoint& wp : result.waypoints) {
    wp.position = world.apply(wp.position);
  }
  return result;
}

}  // namespace ctd
