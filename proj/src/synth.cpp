#include "ctd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ctd {

namespace {

/// Deterministic in-plane basis (e1, e2) with e2 = axis x e1, so growing
/// angles are right-handed about the axis.
std::pair<Vec3, Vec3> circle_basis(const Vec3& axis) {
  const Vec3 a = axis.normalized();
  Vec3 seed = Vec3::UnitX();
  if (std::abs(a.x()) >= std::abs(a.y()) && std::abs(a.x()) >= std::abs(a.z())) {
    seed = std::abs(a.y()) <= std::abs(a.z()) ? Vec3::UnitY() : Vec3::UnitZ();
  } else if (std::abs(a.y()) >= std::abs(a.z())) {
    seed = std::abs(a.x()) <= std::abs(a.z()) ? Vec3::UnitX() : Vec3::UnitZ();
  }
  const Vec3 e1 = a.cross(seed).normalized();
  return {e1, a.cross(e1)};
}

struct RectEdges {
  Vec3 hinge_a;
  Vec3 hinge_b;
  Vec3 grasp;
};

RectEdges layout_edges(const BookLayout& l) {
  const double x0 = l.center_x - 0.5 * l.width;
  const double x1 = l.center_x + 0.5 * l.width;
  const double y0 = l.center_y - 0.5 * l.height;
  const double y1 = l.center_y + 0.5 * l.height;
  const double z = l.depth;
  switch (l.hinge) {
    case HingeSide::Top:
      return {{x0, y0, z}, {x1, y0, z}, {x0 + l.grasp_s * l.width, y1, z}};
    case HingeSide::Bottom:
      return {{x0, y1, z}, {x1, y1, z}, {x0 + l.grasp_s * l.width, y0, z}};
    case HingeSide::Left:
      return {{x0, y0, z}, {x0, y1, z}, {x1, y0 + l.grasp_s * l.height, z}};
    case HingeSide::Right:
      return {{x1, y0, z}, {x1, y1, z}, {x0, y0 + l.grasp_s * l.height, z}};
  }
  throw Error(Errc::InvalidSpec, "unknown hinge side");
}

void validate_layout(const BookLayout& l) {
  if (!(l.width > 0.0) || !(l.height > 0.0) || !(l.depth > 0.0)) {
    throw Error(Errc::InvalidSpec, "book layout extents must be positive");
  }
  if (!l.intrinsics.valid()) {
    throw Error(Errc::InvalidSpec, "layout intrinsics are invalid");
  }
  if (l.grasp_s < 0.0 || l.grasp_s > 1.0) {
    throw Error(Errc::InvalidSpec, "grasp parameter must be in [0, 1]");
  }
  if (l.patch_grid < 2) {
    throw Error(Errc::InvalidSpec, "patch grid must be at least 2");
  }
}

}  // namespace

const char* hinge_side_name(HingeSide s) {
  switch (s) {
    case HingeSide::Top: return "top";
    case HingeSide::Bottom: return "bottom";
    case HingeSide::Left: return "left";
    case HingeSide::Right: return "right";
  }
  return "unknown";
}

std::optional<HingeSide> hinge_side_from_name(const std::string& name) {
  if (name == "top") return HingeSide::Top;
  if (name == "bottom") return HingeSide::Bottom;
  if (name == "left") return HingeSide::Left;
  if (name == "right") return HingeSide::Right;
  return std::nullopt;
}

void SynthSpec::validate() const {
  validate_layout(layout);
  if (n_samples < 3) {
    throw Error(Errc::InvalidSpec, "need at least 3 samples");
  }
  if (!(rate_hz > 0.0)) {
    throw Error(Errc::InvalidSpec, "rate must be positive");
  }
  if (noise_sigma < 0.0) {
    throw Error(Errc::InvalidSpec, "noise sigma must be non-negative");
  }
  if (outlier_fraction < 0.0 || outlier_fraction >= 1.0) {
    throw Error(Errc::InvalidSpec, "outlier fraction must be in [0, 1)");
  }
  if (!(outlier_span > 0.0)) {
    throw Error(Errc::InvalidSpec, "outlier span must be positive");
  }
  if (model_class == ModelClass::Revolute && sweep == 0.0) {
    throw Error(Errc::InvalidSpec, "revolute demo needs a nonzero sweep");
  }
  if (model_class == ModelClass::Prismatic) {
    if (travel == 0.0) {
      throw Error(Errc::InvalidSpec, "prismatic demo needs nonzero travel");
    }
    if (slide_direction.norm() < 1e-12) {
      throw Error(Errc::InvalidSpec, "slide direction must be nonzero");
    }
  }
  if (model_class == ModelClass::Free) {
    throw Error(Errc::InvalidSpec, "free demos are not generated");
  }
}

RevoluteTruth revolute_truth_from_layout(const BookLayout& layout) {
  validate_layout(layout);
  const RectEdges e = layout_edges(layout);
  const Vec3 axis = canonical_sign((e.hinge_b - e.hinge_a).normalized());
  const Vec3 d = e.grasp - e.hinge_a;
  const Vec3 center = e.hinge_a + d.dot(axis) * axis;
  return RevoluteTruth{center, axis, (e.grasp - center).norm(), e.grasp};
}

Vec3 grasp_point_3d(const BookLayout& layout) {
  return layout_edges(layout).grasp;
}

Trajectory3 circle_arc(const Vec3& center, const Vec3& axis, double radius,
                       double angle0, double sweep, int n, double rate_hz) {
  const auto [e1, e2] = circle_basis(axis);
  Trajectory3 traj;
  traj.samples.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double s =
        n > 1 ? static_cast<double>(j) / static_cast<double>(n - 1) : 0.0;
    const double a = angle0 + s * sweep;
    traj.samples.push_back(
        {static_cast<double>(j) / rate_hz,
         center + radius * (std::cos(a) * e1 + std::sin(a) * e2)});
  }
  return traj;
}

double circle_angle_of(const Vec3& center, const Vec3& axis, const Vec3& p) {
  const auto [e1, e2] = circle_basis(axis);
  const Vec3 d = p - center;
  return std::atan2(d.dot(e2), d.dot(e1));
}

Trajectory3 line_track(const Vec3& origin, const Vec3& direction,
                       double travel, int n, double rate_hz) {
  const Vec3 dir = direction.normalized();
  Trajectory3 traj;
  traj.samples.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double s =
        n > 1 ? static_cast<double>(j) / static_cast<double>(n - 1) : 0.0;
    traj.samples.push_back(
        {static_cast<double>(j) / rate_hz, origin + s * travel * dir});
  }
  return traj;
}

Demo gen_demo(const SynthSpec& spec) {
  spec.validate();
  const int n = spec.n_samples;

  Trajectory3 clean;
  GroundTruth truth;
  switch (spec.model_class) {
    case ModelClass::Revolute: {
      const RevoluteTruth rt = revolute_truth_from_layout(spec.layout);
      const double angle0 = circle_angle_of(rt.center, rt.axis, rt.start);
      clean = circle_arc(rt.center, rt.axis, rt.radius, angle0, spec.sweep, n,
                         spec.rate_hz);
      truth.params = RevoluteParams{rt.center, rt.axis, rt.radius};
      truth.sweep_or_travel = spec.sweep;
      break;
    }
    case ModelClass::Prismatic: {
      const Vec3 origin = grasp_point_3d(spec.layout);
      const Vec3 dir = spec.slide_direction.normalized();
      clean = line_track(origin, dir, spec.travel, n, spec.rate_hz);
      const Vec3 canon = canonical_sign(dir);
      truth.params = PrismaticParams{origin, canon};
      truth.sweep_or_travel =
          (clean.samples.back().p - clean.samples.front().p).dot(canon);
      break;
    }
    case ModelClass::Rigid: {
      const Vec3 anchor = grasp_point_3d(spec.layout);
      clean.samples.reserve(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        clean.samples.push_back({static_cast<double>(j) / spec.rate_hz, anchor});
      }
      truth.params = RigidParams{anchor};
      break;
    }
    case ModelClass::Free:
      throw Error(Errc::InvalidSpec, "free demos are not generated");
  }

  Vec3 mean = Vec3::Zero();
  for (const TimedPoint& s : clean.samples) {
    mean += s.p;
  }
  mean /= static_cast<double>(n);

  std::mt19937_64 rng(spec.seed);
  Demo demo;
  demo.traj = clean;
  demo.truth = std::move(truth);
  demo.truth.inlier_labels.assign(static_cast<std::size_t>(n), 1);

  if (spec.noise_sigma > 0.0) {
    std::normal_distribution<double> gauss(0.0, spec.noise_sigma);
    for (TimedPoint& s : demo.traj.samples) {
      s.p += Vec3(gauss(rng), gauss(rng), gauss(rng));
    }
  }

  const auto n_outliers = static_cast<std::size_t>(
      std::llround(spec.outlier_fraction * static_cast<double>(n)));
  if (n_outliers > 0) {
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> box(-0.5 * spec.outlier_span,
                                               0.5 * spec.outlier_span);
    for (std::size_t i = 0; i < n_outliers; ++i) {
      const std::size_t idx = order[i];
      demo.traj.samples[idx].p = mean + Vec3(box(rng), box(rng), box(rng));
      demo.truth.inlier_labels[idx] = 0;
    }
  }
  return demo;
}

SynthScene gen_scene(const SynthSpec& spec) {
  spec.validate();
  const BookLayout& l = spec.layout;
  const Intrinsics& k = l.intrinsics;
  const RectEdges edges = layout_edges(l);

  const double x0 = l.center_x - 0.5 * l.width;
  const double x1 = l.center_x + 0.5 * l.width;
  const double y0 = l.center_y - 0.5 * l.height;
  const double y1 = l.center_y + 0.5 * l.height;
  const std::array<Vec3, 4> corners = {Vec3(x0, y0, l.depth),
                                       Vec3(x1, y0, l.depth),
                                       Vec3(x0, y1, l.depth),
                                       Vec3(x1, y1, l.depth)};
  BBox bbox{1e30, 1e30, -1e30, -1e30};
  for (const Vec3& c : corners) {
    const PixelDepth px = project(c, k);
    bbox.u0 = std::min(bbox.u0, px.u);
    bbox.v0 = std::min(bbox.v0, px.v);
    bbox.u1 = std::max(bbox.u1, px.u);
    bbox.v1 = std::max(bbox.v1, px.v);
  }

  SynthScene out;
  out.annotation.label = "book";
  out.annotation.bbox = bbox;
  out.annotation.grasp = project(edges.grasp, k);
  out.annotation.intrinsics = k;

  // Planar depth patch spanning the box, border included; depth by
  // ray-plane intersection (constant for this frontal layout).
  const Vec3 plane_point(l.center_x, l.center_y, l.depth);
  const Vec3 plane_normal(0.0, 0.0, -1.0);
  const int g = l.patch_grid;
  out.annotation.depth_patch.reserve(static_cast<std::size_t>(g) * g);
  for (int iv = 0; iv < g; ++iv) {
    for (int iu = 0; iu < g; ++iu) {
      const double u =
          bbox.u0 + (bbox.u1 - bbox.u0) * iu / static_cast<double>(g - 1);
      const double v =
          bbox.v0 + (bbox.v1 - bbox.v0) * iv / static_cast<double>(g - 1);
      const Vec3 ray((u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0);
      const double denom = ray.dot(plane_normal);
      const double d =
          denom != 0.0 ? plane_point.dot(plane_normal) / denom : 0.0;
      out.annotation.depth_patch.push_back({u, v, d});
    }
  }

  const RevoluteTruth rt = revolute_truth_from_layout(l);
  out.truth.hinge_side = l.hinge;
  const bool horizontal_hinge =
      l.hinge == HingeSide::Top || l.hinge == HingeSide::Bottom;
  const bool horizontal_longer = bbox.width() > bbox.height();
  out.truth.hinge_class =
      std::abs(bbox.width() - bbox.height()) < kSquareBBoxTolerancePx
          ? EdgeClass::Longer
          : (horizontal_hinge == horizontal_longer ? EdgeClass::Longer
                                                   : EdgeClass::Shorter);
  const PixelDepth ha = project(edges.hinge_a, k);
  const PixelDepth hb = project(edges.hinge_b, k);
  out.truth.hinge_edge_px = ImageSegment{{ha.u, ha.v}, {hb.u, hb.v}};
  out.truth.hinge_a3 = edges.hinge_a;
  out.truth.hinge_b3 = edges.hinge_b;
  out.truth.center3 = rt.center;
  out.truth.radius = rt.radius;
  out.truth.plane_normal = plane_normal;
  return out;
}

}  // namespace ctd
