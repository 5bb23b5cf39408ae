#pragma once

#include "ctd/error.hpp"
#include "ctd/geometry.hpp"

namespace ctd {

/// Pinhole intrinsics of a rectified, depth-aligned camera.
struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double width = 0.0;
  double height = 0.0;

  bool valid() const {
    return fx > 0.0 && fy > 0.0 && cx > 0.0 && cx < width && cy > 0.0 &&
           cy < height;
  }
};

/// One pixel observation with metric depth along the optical axis.
/// Sub-pixel coordinates are allowed; d == 0 encodes "no depth".
struct PixelDepth {
  double u = 0.0;
  double v = 0.0;
  double d = 0.0;

  bool has_depth() const { return d > 0.0; }
};

/// Pixel + depth to a camera-frame 3D point (z along the optical axis).
/// Throws Errc::ZeroDepth when p.d <= 0.
Vec3 deproject(const PixelDepth& p, const Intrinsics& k);

/// Camera-frame point back to pixel + depth; exact inverse of deproject.
/// Throws Errc::BehindCamera when p.z() <= 0.
PixelDepth project(const Vec3& p, const Intrinsics& k);

}  // namespace ctd
