#pragma once

#include <optional>
#include <string>

#include "ctd/artmodel.hpp"
#include "ctd/camera.hpp"
#include "ctd/scene.hpp"

namespace ctd {

/// Which bounding-box edge pair carries the rotation axis.
enum class EdgeClass { Longer, Shorter };

const char* edge_class_name(EdgeClass c);
std::optional<EdgeClass> edge_class_from_name(const std::string& name);

/// Bounding boxes whose sides differ by less than this are treated as
/// square: the edge classes coincide and the furthest-edge rule decides.
inline constexpr double kSquareBBoxTolerancePx = 1.0;

/// The learned mapping from a novel object's image to its reference frame.
/// Revolute: the axis sits on the `edge_class` edge furthest from the
/// grasp. Prismatic: the motion direction as seen in the image plane.
struct RefFrameRule {
  ModelClass model_class = ModelClass::Revolute;
  // Revolute rule
  EdgeClass edge_class = EdgeClass::Longer;
  double grasp_axis_dist_norm = 0.0;  // grasp-to-axis distance / bbox diagonal,
                                      // stored for validation reporting only
  // Prismatic rule: image-plane motion direction (unit, or zero when the
  // demonstrated motion projects to a point).
  Vec2 direction_px = Vec2::Zero();
};

/// Origin plus right-handed orthonormal basis (columns X, Y, Z). Y carries
/// the joint axis, Z the object surface normal component orthogonal to it.
struct ReferenceFrame {
  Vec3 origin = Vec3::Zero();
  Mat3 basis = Mat3::Identity();

  Vec3 x_axis() const { return basis.col(0); }
  Vec3 y_axis() const { return basis.col(1); }
  Vec3 z_axis() const { return basis.col(2); }

  Vec3 to_local(const Vec3& p) const {
    return basis.transpose() * (p - origin);
  }
  Vec3 to_world(const Vec3& local) const { return basis * local + origin; }
};

/// Projects the fitted rotation axis into the image and matches it to the
/// bounding-box edge with the smallest angular difference (ties go to the
/// edge further from the grasp). Records whether that edge belongs to the
/// longer or the shorter pair. Throws Errc::ProjectionDegenerate when the
/// axis is viewed end-on.
RefFrameRule classify_axis_edge(const RevoluteParams& model, const BBox& bbox,
                                const PixelDepth& grasp_px,
                                const Intrinsics& k);

/// Applies a revolute rule to a novel box: returns the edge of the rule's
/// class whose midpoint is furthest from the grasp. Square-ish boxes fall
/// back to the furthest edge over all four.
ImageSegment predict_axis(const RefFrameRule& rule, const BBox& bbox,
                          const PixelDepth& grasp_px);

/// Perpendicular foot of the grasp on the predicted axis, clamped to the
/// segment.
Vec2 predict_center_px(const ImageSegment& axis_seg,
                       const PixelDepth& grasp_px);

/// Builds the execution frame: Y = axis, Z = surface normal orthogonalised
/// against Y, X = Y x Z. Revolute frames sit at the rotation center,
/// prismatic frames at the grasp. Throws Errc::ParallelNormal when axis
/// and normal are parallel within 1e-6.
ReferenceFrame build_frame(ModelClass model_class, const Vec3& center3,
                           const Vec3& axis3, const Vec3& surface_normal,
                           const Vec3& grasp3);

/// Least-squares plane normal of the deprojected patch, oriented toward
/// the camera (non-positive z). Needs >= 3 valid-depth, non-collinear
/// samples (Errc::DegeneratePatch).
Vec3 estimate_surface_normal(const std::vector<PixelDepth>& depth_patch,
                             const Intrinsics& k);

}  // namespace ctd
