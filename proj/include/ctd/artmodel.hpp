#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ctd/error.hpp"
#include "ctd/geometry.hpp"

namespace ctd {

/// Articulation classes a tracked grasp point can obey. Free stands for
/// unconstrained motion and acts as the fallback in model selection.
enum class ModelClass { Rigid, Prismatic, Revolute, Free };

const char* model_class_name(ModelClass c);
std::optional<ModelClass> model_class_from_name(const std::string& name);

/// Degrees of freedom per class: point (3), line in 3D (4),
/// circle in 3D (6), none (0).
int model_dof(ModelClass c);

/// Codimension of the model manifold, i.e. how many independent Gaussian
/// noise components the scalar residual absorbs. Distance to a point spans
/// 3 dimensions, to a line 2, to the revolute cylinder 1.
int model_codim(ModelClass c);

struct RigidParams {
  Vec3 anchor = Vec3::Zero();
};

struct PrismaticParams {
  Vec3 origin = Vec3::Zero();     // point on the line (inlier centroid)
  Vec3 direction = Vec3::UnitX(); // unit, canonical sign
};

struct RevoluteParams {
  Vec3 center = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();      // unit, canonical sign
  double radius = 0.0;            // > 0, <= kMaxRevoluteRadius
};

struct FreeParams {};

using ModelParams =
    std::variant<RigidParams, PrismaticParams, RevoluteParams, FreeParams>;

ModelClass model_class_of(const ModelParams& params);

/// Degeneracy guard: near-straight arcs blow the circumradius up; fits
/// beyond this radius are rejected so selection falls back to prismatic.
inline constexpr double kMaxRevoluteRadius = 10.0;

/// Minimum separation for a prismatic minimal sample (meters).
inline constexpr double kMinSampleSeparation = 1e-6;

/// Minimum triangle area for a revolute minimal sample (square meters).
inline constexpr double kMinTriangleArea = 1e-9;

struct TimedPoint {
  double t = 0.0;  // seconds
  Vec3 p = Vec3::Zero();
};

/// Time-stamped grasp-point track. Timestamps must be strictly increasing;
/// they are carried for reporting but ignored by the purely geometric fits.
struct Trajectory3 {
  std::vector<TimedPoint> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  const Vec3& point(std::size_t i) const { return samples[i].p; }
  std::vector<Vec3> points() const;
  double duration() const {
    return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
  }
};

/// Outcome of fitting one model class to a trajectory.
struct FitResult {
  ModelClass model_class = ModelClass::Free;
  ModelParams params = FreeParams{};
  std::vector<double> residuals;       // per sample, meters
  std::vector<std::uint8_t> inlier_mask;
  double log_likelihood = 0.0;         // nats, filled by the robust scorer
  double gamma = 1.0;                  // inlier mixing weight of that score
  int dof = 0;

  std::size_t inlier_count() const;
};

/// Per-sample orthogonal distance to the model manifold. Free motion has
/// no manifold and returns all zeros (its likelihood is handled by the
/// selection module).
std::vector<double> residuals(const ModelParams& params,
                              const Trajectory3& traj);
double residual(const ModelParams& params, const Vec3& p);

/// Anchor = sample centroid. Throws Errc::EmptyTrajectory.
FitResult fit_rigid(const Trajectory3& traj);

/// Line through two points; origin = p0. nullopt when the points are
/// closer than kMinSampleSeparation.
std::optional<PrismaticParams> try_fit_prismatic_minimal(const Vec3& p0,
                                                         const Vec3& p1);
/// Throwing form of the above (Errc::DegenerateSample).
PrismaticParams fit_prismatic_minimal(const Vec3& p0, const Vec3& p1);

/// Circumcircle of three points. nullopt on collinear/coincident samples
/// or circumradius beyond kMaxRevoluteRadius.
std::optional<RevoluteParams> try_fit_revolute_minimal(const Vec3& p0,
                                                       const Vec3& p1,
                                                       const Vec3& p2);
/// Throwing form (Errc::DegenerateSample / Errc::RadiusOverflow).
RevoluteParams fit_revolute_minimal(const Vec3& p0, const Vec3& p1,
                                    const Vec3& p2);

/// Total-least-squares line through the masked samples: origin = centroid,
/// direction = dominant scatter eigenvector. Requires >= 2 inliers that do
/// not all coincide (Errc::DegenerateSample otherwise). An empty mask
/// selects every sample.
PrismaticParams refine_prismatic(const Trajectory3& traj,
                                 const std::vector<std::uint8_t>& inliers);

/// Two-stage circle refinement: least-squares plane (centroid + smallest
/// scatter eigenvector as axis), then an algebraic in-plane circle fit
/// followed by a short Gauss-Newton polish of the geometric distances.
/// Throws Errc::DegenerateSample on collinear inliers and
/// Errc::RadiusOverflow when the radius exceeds kMaxRevoluteRadius.
RevoluteParams refine_revolute(const Trajectory3& traj,
                               const std::vector<std::uint8_t>& inliers,
                               bool polish = true);

}  // namespace ctd
