#include "ctd/artmodel.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

namespace ctd {

namespace {

std::vector<Vec3> masked_points(const Trajectory3& traj,
                                const std::vector<std::uint8_t>& mask) {
  if (!mask.empty() && mask.size() != traj.size()) {
    throw Error(Errc::InvalidSpec, "inlier mask size does not match trajectory");
  }
  std::vector<Vec3> pts;
  pts.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (mask.empty() || mask[i]) {
      pts.push_back(traj.point(i));
    }
  }
  return pts;
}

Vec3 centroid(const std::vector<Vec3>& pts) {
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : pts) {
    sum += p;
  }
  return sum / static_cast<double>(pts.size());
}

Mat3 scatter(const std::vector<Vec3>& pts, const Vec3& mean) {
  Mat3 s = Mat3::Zero();
  for (const Vec3& p : pts) {
    const Vec3 d = p - mean;
    s += d * d.transpose();
  }
  return s;
}

struct PlaneFit {
  Vec3 centroid;
  Vec3 normal;      // unit, smallest scatter direction
  Vec3 in_plane;    // unit, largest scatter direction
  Eigen::Vector3d eigenvalues;  // ascending
};

PlaneFit fit_plane(const std::vector<Vec3>& pts) {
  const Vec3 m = centroid(pts);
  Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter(pts, m));
  return PlaneFit{m, eig.eigenvectors().col(0), eig.eigenvectors().col(2),
                  eig.eigenvalues()};
}

struct Circle2 {
  Vec2 center;
  double radius;
};

/// Kasa algebraic fit: linear least squares on |q|^2 = 2 c.q + b.
Circle2 fit_circle_kasa(const std::vector<Vec2>& pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 2.0 * pts[i].x();
    a(i, 1) = 2.0 * pts[i].y();
    a(i, 2) = 1.0;
    y(i) = pts[i].squaredNorm();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) {
    throw Error(Errc::DegenerateSample,
                "inliers are collinear in the fitted plane");
  }
  const Eigen::Vector3d sol = qr.solve(y);
  const Vec2 c(sol(0), sol(1));
  const double r2 = sol(2) + c.squaredNorm();
  if (!(r2 > 0.0) || !std::isfinite(r2)) {
    throw Error(Errc::DegenerateSample, "circle fit produced no radius");
  }
  return Circle2{c, std::sqrt(r2)};
}

double circle3_sse(const std::vector<Vec3>& pts, const RevoluteParams& c) {
  double sse = 0.0;
  for (const Vec3& p : pts) {
    const Vec3 w = p - c.center;
    const double h = w.dot(c.axis);
    const double rho = (w - h * c.axis).norm();
    const double f2 = (rho - c.radius) * (rho - c.radius) + h * h;
    sse += f2;
  }
  return sse;
}

/// Joint Gauss-Newton over center, axis and radius on the 3D distance to
/// the circle curve, seeded by the plane + algebraic fit. The axis moves
/// in its tangent plane and is renormalised each step; a backtracking line
/// search keeps every accepted step a strict improvement (the undamped
/// normal equations are ill-conditioned along the axis directions).
RevoluteParams polish_circle3(const std::vector<Vec3>& pts,
                              RevoluteParams seed) {
  constexpr int kMaxIters = 20;
  constexpr double kStepTol = 1e-12;
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  using Mat6 = Eigen::Matrix<double, 6, 6>;

  RevoluteParams cur = seed;
  double cur_sse = circle3_sse(pts, cur);
  for (int iter = 0; iter < kMaxIters; ++iter) {
    Vec3 t1 = cur.axis.cross(Vec3::UnitX());
    if (t1.norm() < 1e-6) {
      t1 = cur.axis.cross(Vec3::UnitY());
    }
    t1.normalize();
    const Vec3 t2 = cur.axis.cross(t1);

    Mat6 jtj = Mat6::Zero();
    Vec6 jtf = Vec6::Zero();
    for (const Vec3& p : pts) {
      const Vec3 w = p - cur.center;
      const double h = w.dot(cur.axis);
      const Vec3 radial = w - h * cur.axis;
      const double rho = radial.norm();
      if (rho < 1e-12) {
        continue;
      }
      const Vec3 u = radial / rho;
      const double dr = rho - cur.radius;
      const double f = std::sqrt(dr * dr + h * h);
      if (f < 1e-14) {
        continue;  // already on the curve, no gradient information
      }
      Vec6 row;
      row.head<3>() = (-dr * u - h * cur.axis) / f;
      const double axis_gain = h * (cur.radius / rho) / f;
      row(3) = w.dot(t1) * axis_gain;
      row(4) = w.dot(t2) * axis_gain;
      row(5) = -dr / f;
      jtj += row * row.transpose();
      jtf += row * f;
    }
    Eigen::LDLT<Mat6> ldlt(jtj);
    if (ldlt.info() != Eigen::Success) {
      break;
    }
    const Vec6 step = ldlt.solve(-jtf);
    if (!step.allFinite()) {
      break;
    }

    RevoluteParams accepted = cur;
    double accepted_sse = cur_sse;
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 24 && !improved; ++half, scale *= 0.5) {
      RevoluteParams trial = cur;
      trial.center += scale * step.head<3>();
      trial.axis =
          (cur.axis + scale * (step(3) * t1 + step(4) * t2)).normalized();
      trial.radius += scale * step(5);
      if (!(trial.radius > 0.0)) {
        continue;
      }
      const double trial_sse = circle3_sse(pts, trial);
      if (trial_sse < accepted_sse) {
        accepted = trial;
        accepted_sse = trial_sse;
        improved = true;
      }
    }
    if (!improved) {
      break;
    }
    cur = accepted;
    cur_sse = accepted_sse;
    if (scale * step.norm() < kStepTol) {
      break;
    }
  }
  const bool usable = std::isfinite(cur.radius) && cur.radius > 0.0 &&
                      cur.center.allFinite() && cur.axis.allFinite();
  if (!usable || cur_sse > circle3_sse(pts, seed)) {
    return seed;
  }
  cur.axis = canonical_sign(cur.axis);
  return cur;
}

}  // namespace

const char* model_class_name(ModelClass c) {
  switch (c) {
    case ModelClass::Rigid: return "rigid";
    case ModelClass::Prismatic: return "prismatic";
    case ModelClass::Revolute: return "revolute";
    case ModelClass::Free: return "free";
  }
  return "unknown";
}

std::optional<ModelClass> model_class_from_name(const std::string& name) {
  if (name == "rigid") return ModelClass::Rigid;
  if (name == "prismatic") return ModelClass::Prismatic;
  if (name == "revolute") return ModelClass::Revolute;
  if (name == "free") return ModelClass::Free;
  return std::nullopt;
}

int model_dof(ModelClass c) {
  switch (c) {
    case ModelClass::Rigid: return 3;
    case ModelClass::Prismatic: return 4;
    case ModelClass::Revolute: return 6;
    case ModelClass::Free: return 0;
  }
  return 0;
}

int model_codim(ModelClass c) {
  switch (c) {
    case ModelClass::Rigid: return 3;
    case ModelClass::Prismatic: return 2;
    case ModelClass::Revolute: return 1;
    case ModelClass::Free: return 1;
  }
  return 1;
}

ModelClass model_class_of(const ModelParams& params) {
  if (std::holds_alternative<RigidParams>(params)) return ModelClass::Rigid;
  if (std::holds_alternative<PrismaticParams>(params))
    return ModelClass::Prismatic;
  if (std::holds_alternative<RevoluteParams>(params))
    return ModelClass::Revolute;
  return ModelClass::Free;
}

std::vector<Vec3> Trajectory3::points() const {
  std::vector<Vec3> pts;
  pts.reserve(samples.size());
  for (const TimedPoint& s : samples) {
    pts.push_back(s.p);
  }
  return pts;
}

std::size_t FitResult::inlier_count() const {
  return static_cast<std::size_t>(
      std::count(inlier_mask.begin(), inlier_mask.end(), std::uint8_t{1}));
}

double residual(const ModelParams& params, const Vec3& p) {
  if (const auto* rigid = std::get_if<RigidParams>(&params)) {
    return (p - rigid->anchor).norm();
  }
  if (const auto* pris = std::get_if<PrismaticParams>(&params)) {
    const Vec3 d = p - pris->origin;
    return (d - d.dot(pris->direction) * pris->direction).norm();
  }
  if (const auto* rev = std::get_if<RevoluteParams>(&params)) {
    const Vec3 d = p - rev->center;
    const double axial_dist = (d - d.dot(rev->axis) * rev->axis).norm();
    return std::abs(axial_dist - rev->radius);
  }
  return 0.0;
}

std::vector<double> residuals(const ModelParams& params,
                              const Trajectory3& traj) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (const TimedPoint& s : traj.samples) {
    out.push_back(residual(params, s.p));
  }
  return out;
}

FitResult fit_rigid(const Trajectory3& traj) {
  if (traj.empty()) {
    throw Error(Errc::EmptyTrajectory, "rigid fit needs at least one sample");
  }
  RigidParams params{centroid(traj.points())};
  FitResult fit;
  fit.model_class = ModelClass::Rigid;
  fit.params = params;
  fit.residuals = residuals(fit.params, traj);
  fit.inlier_mask.assign(traj.size(), 1);
  fit.dof = model_dof(ModelClass::Rigid);
  return fit;
}

std::optional<PrismaticParams> try_fit_prismatic_minimal(const Vec3& p0,
                                                         const Vec3& p1) {
  const Vec3 diff = p1 - p0;
  const double len = diff.norm();
  if (len <= kMinSampleSeparation) {
    return std::nullopt;
  }
  return PrismaticParams{p0, canonical_sign(diff / len)};
}

PrismaticParams fit_prismatic_minimal(const Vec3& p0, const Vec3& p1) {
  auto fit = try_fit_prismatic_minimal(p0, p1);
  if (!fit) {
    throw Error(Errc::DegenerateSample, "prismatic sample points coincide");
  }
  return *fit;
}

std::optional<RevoluteParams> try_fit_revolute_minimal(const Vec3& p0,
                                                       const Vec3& p1,
                                                       const Vec3& p2) {
  const Vec3 u = p1 - p0;
  const Vec3 v = p2 - p0;
  const Vec3 w = u.cross(v);
  const double w_norm = w.norm();
  if (0.5 * w_norm <= kMinTriangleArea) {
    return std::nullopt;
  }
  const Vec3 center =
      p0 + (u.squaredNorm() * v - v.squaredNorm() * u).cross(w) /
               (2.0 * w.squaredNorm());
  const double radius = (p0 - center).norm();
  if (!(radius > 0.0) || radius > kMaxRevoluteRadius) {
    return std::nullopt;
  }
  return RevoluteParams{center, canonical_sign(w / w_norm), radius};
}

RevoluteParams fit_revolute_minimal(const Vec3& p0, const Vec3& p1,
                                    const Vec3& p2) {
  const Vec3 u = p1 - p0;
  const Vec3 v = p2 - p0;
  if (0.5 * u.cross(v).norm() <= kMinTriangleArea) {
    throw Error(Errc::DegenerateSample,
                "revolute sample points are collinear or coincident");
  }
  auto fit = try_fit_revolute_minimal(p0, p1, p2);
  if (!fit) {
    throw Error(Errc::RadiusOverflow, "circumradius exceeds the guard");
  }
  return *fit;
}

PrismaticParams refine_prismatic(const Trajectory3& traj,
                                 const std::vector<std::uint8_t>& inliers) {
  const std::vector<Vec3> pts = masked_points(traj, inliers);
  if (pts.size() < 2) {
    throw Error(Errc::DegenerateSample, "prismatic refine needs >= 2 inliers");
  }
  const Vec3 m = centroid(pts);
  Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter(pts, m));
  if (eig.eigenvalues()(2) <= 1e-20) {
    throw Error(Errc::DegenerateSample, "all inliers coincide");
  }
  return PrismaticParams{m, canonical_sign(eig.eigenvectors().col(2))};
}

RevoluteParams refine_revolute(const Trajectory3& traj,
                               const std::vector<std::uint8_t>& inliers,
                               bool polish) {
  const std::vector<Vec3> pts = masked_points(traj, inliers);
  if (pts.size() < 3) {
    throw Error(Errc::DegenerateSample, "revolute refine needs >= 3 inliers");
  }
  const PlaneFit plane = fit_plane(pts);
  const double lam1 = plane.eigenvalues(1);
  const double lam2 = plane.eigenvalues(2);
  if (lam2 <= 1e-20 || lam1 <= 1e-12 * lam2) {
    throw Error(Errc::DegenerateSample, "inliers are collinear");
  }
  const Vec3 axis = canonical_sign(plane.normal);
  const Vec3 e1 = plane.in_plane;
  const Vec3 e2 = axis.cross(e1);

  std::vector<Vec2> projected;
  projected.reserve(pts.size());
  for (const Vec3& p : pts) {
    const Vec3 d = p - plane.centroid;
    projected.emplace_back(d.dot(e1), d.dot(e2));
  }
  const Circle2 circle = fit_circle_kasa(projected);
  if (circle.radius > kMaxRevoluteRadius) {
    throw Error(Errc::RadiusOverflow, "refined radius exceeds the guard");
  }
  RevoluteParams fit{
      plane.centroid + circle.center.x() * e1 + circle.center.y() * e2, axis,
      circle.radius};
  if (polish) {
    fit = polish_circle3(pts, fit);
    if (fit.radius > kMaxRevoluteRadius) {
      throw Error(Errc::RadiusOverflow, "refined radius exceeds the guard");
    }
  }
  return fit;
}

}  // namespace ctd
