#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ctd/camera.hpp"

namespace ctd {

/// Axis-aligned pixel bounding box, detector-style.
struct BBox {
  double u0 = 0.0;
  double v0 = 0.0;
  double u1 = 0.0;
  double v1 = 0.0;

  bool valid() const { return u0 < u1 && v0 < v1; }
  double width() const { return u1 - u0; }
  double height() const { return v1 - v0; }
};

/// Everything the vision stack reports about one scene: label, bounding
/// box, grasp pixel with depth, intrinsics and a sparse depth patch inside
/// the box for surface-normal estimation.
struct SceneAnnotation {
  std::string label;
  BBox bbox;
  PixelDepth grasp;
  std::optional<std::array<double, 4>> grasp_orientation;  // wxyz quaternion
  Intrinsics intrinsics;
  std::vector<PixelDepth> depth_patch;
};

}  // namespace ctd
