#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctd/refframe.hpp"
#include "ctd/scene.hpp"

namespace ctd {

enum class HingeSide { Top, Bottom, Left, Right };

const char* hinge_side_name(HingeSide s);
std::optional<HingeSide> hinge_side_from_name(const std::string& name);

/// Planar book-like object facing the camera: a rectangle of
/// width x height meters centered at (center_x, center_y, depth) in the
/// camera frame, hinged along one edge, grasped on the opposite edge at
/// parameter grasp_s in [0, 1].
struct BookLayout {
  double center_x = 0.0;
  double center_y = 0.0;
  double depth = 1.0;
  double width = 0.15;   // x extent, meters
  double height = 0.22;  // y extent, meters
  HingeSide hinge = HingeSide::Left;
  double grasp_s = 0.5;
  Intrinsics intrinsics{525.0, 525.0, 319.5, 239.5, 640.0, 480.0};
  int patch_grid = 12;  // patch_grid^2 depth samples incl. bbox border
};

/// Scenario description for one synthetic demonstration.
struct SynthSpec {
  ModelClass model_class = ModelClass::Revolute;
  BookLayout layout;
  double sweep = 1.5707963267948966;  // rad, signed (revolute)
  double travel = 0.3;                // meters, signed (prismatic)
  Vec3 slide_direction = Vec3::UnitX();  // unit (prismatic)
  int n_samples = 100;
  double rate_hz = 20.0;
  double noise_sigma = 0.0;      // meters, isotropic
  double outlier_fraction = 0.0; // in [0, 1)
  double outlier_span = 1.0;     // meters, box side around the track centroid
  std::uint64_t seed = 0;

  void validate() const;  // Errc::InvalidSpec
};

/// Revolute geometry implied by the layout: axis along the hinge edge,
/// center at the perpendicular foot of the grasp, radius = the box side
/// between them.
struct RevoluteTruth {
  Vec3 center = Vec3::Zero();
  Vec3 axis = Vec3::UnitY();
  double radius = 0.0;
  Vec3 start = Vec3::Zero();  // grasp at the start of the demo
};

RevoluteTruth revolute_truth_from_layout(const BookLayout& layout);
Vec3 grasp_point_3d(const BookLayout& layout);

struct GroundTruth {
  ModelParams params = FreeParams{};
  std::vector<std::uint8_t> inlier_labels;  // 1 = clean sample
  double sweep_or_travel = 0.0;             // signed, as generated
};

struct Demo {
  Trajectory3 traj;
  GroundTruth truth;
};

/// Deterministic synthetic demonstration: samples the exact model
/// (uniform in angle / offset), adds isotropic Gaussian noise and replaces
/// a labelled fraction with uniform draws from the outlier box.
Demo gen_demo(const SynthSpec& spec);

/// Ground-truth answers a reference-frame test needs about the scene.
struct SceneTruth {
  HingeSide hinge_side = HingeSide::Left;
  EdgeClass hinge_class = EdgeClass::Longer;
  ImageSegment hinge_edge_px;
  Vec3 hinge_a3 = Vec3::Zero();  // hinge edge endpoints in 3D
  Vec3 hinge_b3 = Vec3::Zero();
  Vec3 center3 = Vec3::Zero();   // perpendicular foot of the grasp
  double radius = 0.0;
  Vec3 plane_normal = Vec3::Zero();  // camera-facing
};

struct SynthScene {
  SceneAnnotation annotation;
  SceneTruth truth;
};

/// Vision-stack stand-in: bounding box from the projected rectangle, the
/// grasp pixel consistent with the 3D grasp, label "book", and a planar
/// depth patch spanning the box (border included).
SynthScene gen_scene(const SynthSpec& spec);

// Low-level generators, also used directly by tests.

/// Uniform arc about (center, axis): point(angle0 + j*sweep/(n-1)).
Trajectory3 circle_arc(const Vec3& center, const Vec3& axis, double radius,
                       double angle0, double sweep, int n, double rate_hz);

/// In-plane angle of p about (center, axis), against the same deterministic
/// basis circle_arc uses.
double circle_angle_of(const Vec3& center, const Vec3& axis, const Vec3& p);

/// Uniform slide from origin along direction.
Trajectory3 line_track(const Vec3& origin, const Vec3& direction,
                       double travel, int n, double rate_hz);

}  // namespace ctd
