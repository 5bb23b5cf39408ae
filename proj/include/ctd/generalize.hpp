#pragma once

#include <optional>
#include <vector>

#include "ctd/descriptor.hpp"

namespace ctd {

struct Waypoint {
  double t = 0.0;        // seconds
  Vec3 position = Vec3::Zero();
  double joint_value = 0.0;  // frame angle (rad) or offset (m)
};

struct GeneralizationRequest {
  TaskDescriptor descriptor;
  SceneAnnotation scene;
  int n_waypoints = 50;
  std::optional<double> sweep;       // rad or m; default: demonstrated value
  std::optional<double> duration_s;  // default: demonstrated duration
  RigidTransform world_from_camera;  // default identity
};

/// What the pipeline decided, for reports and plot overlays. Pixel
/// quantities stay in camera image coordinates.
struct GeneralizationReport {
  ModelClass model_class = ModelClass::Free;
  double predicted_radius_or_travel = 0.0;
  double sweep_used = 0.0;
  double duration_used = 0.0;
  ImageSegment axis_px;           // revolute only
  Vec2 center_px = Vec2::Zero();  // revolute only
  Vec2 grasp_px = Vec2::Zero();
  double edge_depth = 0.0;        // depth used to deproject the axis
  double grasp_axis_dist_norm_predicted = 0.0;
  double grasp_axis_dist_norm_demonstrated = 0.0;
  std::vector<Vec2> waypoint_px;  // projected waypoints (camera frame)
};

struct GeneralizationResult {
  ReferenceFrame frame;  // in world coordinates
  std::vector<Waypoint> waypoints;
  GeneralizationReport report;
};

/// Circle motion about the frame's Y axis, starting exactly at the grasp.
/// Positive sweep is right-handed about +Y. Throws Errc::GraspOnAxis when
/// the grasp sits on the axis (frame-local radius < 1e-6 m).
std::vector<Waypoint> revolute_waypoints(const ReferenceFrame& frame,
                                         const Vec3& grasp3, double sweep,
                                         int n, double duration);

/// Straight motion along the frame's Y axis from the grasp.
std::vector<Waypoint> prismatic_waypoints(const ReferenceFrame& frame,
                                          const Vec3& grasp3, double travel,
                                          int n, double duration);

/// Full pipeline: predict the reference frame from the descriptor's rule
/// and the novel scene, then emit the waypoint trajectory. Errors from the
/// sub-operations are re-thrown tagged with the pipeline stage.
GeneralizationResult generalize(const GeneralizationRequest& req);

}  // namespace ctd
