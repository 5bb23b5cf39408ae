#pragma once

#include <optional>
#include <string>

#include "ctd/refframe.hpp"
#include "ctd/selection.hpp"

namespace ctd {

inline constexpr int kDescriptorVersion = 1;

/// Compact copy of the selection table kept with the descriptor.
struct SelectionSummary {
  struct Entry {
    ModelClass model_class = ModelClass::Free;
    bool fitted = false;
    std::string failure_reason;
    double bic = 0.0;
    double posterior = 0.0;
  };
  std::array<Entry, 4> entries;
};

SelectionSummary summarize(const SelectionReport& report);

struct Provenance {
  std::string recording_id;
  std::size_t sample_count = 0;
  double duration_s = 0.0;
  /// Swept angle (rad, revolute) or travel distance (m, prismatic),
  /// signed as demonstrated. Zero for non-executable classes.
  double swept_value = 0.0;
  SelectionSummary selection;
};

struct GraspInfo {
  PixelDepth px;
  Vec3 position = Vec3::Zero();
  std::optional<std::array<double, 4>> orientation;  // wxyz, pass-through
};

/// The transferable skill: object identity, grasp, bounding box, the
/// winning articulation model and the reference-frame rule, plus where it
/// all came from. Rigid/Free descriptors carry no rule and cannot be
/// executed.
struct TaskDescriptor {
  int version = kDescriptorVersion;
  std::string object_label;
  GraspInfo grasp;
  BBox bbox;
  ModelClass model_class = ModelClass::Free;
  ModelParams model_params = FreeParams{};
  std::optional<RefFrameRule> ref_rule;
  Provenance provenance;

  bool executable() const {
    return (model_class == ModelClass::Prismatic ||
            model_class == ModelClass::Revolute) &&
           ref_rule.has_value();
  }
};

struct AssembleOptions {
  std::string recording_id;
  bool require_executable = false;
};

/// Builds the descriptor from the demonstration scene, the trajectory and
/// the selection outcome. The swept value is the unwrapped angle between
/// consecutive inliers about the axis (revolute) or the signed extent
/// along the direction (prismatic). Throws Errc::NonExecutableModel when
/// the winner is Rigid/Free and executability is required.
TaskDescriptor assemble(const SceneAnnotation& scene, const Trajectory3& traj,
                        const SelectionReport& selection,
                        const std::optional<RefFrameRule>& rule,
                        const AssembleOptions& options);

/// Canonical JSON document, exact round trip. parse rejects unknown
/// fields (Errc::SchemaViolation with the field path) and foreign
/// versions (Errc::VersionMismatch).
std::string serialize(const TaskDescriptor& d);
TaskDescriptor parse_descriptor(const std::string& text);

}  // namespace ctd
