#include "ctd/camera.hpp"

namespace ctd {

Vec3 deproject(const PixelDepth& p, const Intrinsics& k) {
  if (!(p.d > 0.0)) {
    throw Error(Errc::ZeroDepth, "cannot deproject a pixel without depth");
  }
  return Vec3((p.u - k.cx) * p.d / k.fx, (p.v - k.cy) * p.d / k.fy, p.d);
}

PixelDepth project(const Vec3& p, const Intrinsics& k) {
  if (!(p.z() > 0.0)) {
    throw Error(Errc::BehindCamera, "point is behind the camera");
  }
  return PixelDepth{k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy,
                    p.z()};
}

}  // namespace ctd
