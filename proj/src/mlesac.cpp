#include "ctd/mlesac.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ctd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Mixture density of one scalar residual; the Gaussian carries the
/// normaliser of a `codim`-dimensional isotropic error.
double mixture_density(double r, double gamma, double sigma, double nu,
                       int codim) {
  const double norm =
      std::pow(kTwoPi * sigma * sigma, -0.5 * static_cast<double>(codim));
  const double gauss = norm * std::exp(-r * r / (2.0 * sigma * sigma));
  return gamma * gauss + (1.0 - gamma) / nu;
}

std::vector<std::uint8_t> threshold_mask(const std::vector<double>& residuals,
                                         double threshold) {
  std::vector<std::uint8_t> mask(residuals.size(), 0);
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    mask[i] = residuals[i] < threshold ? 1 : 0;
  }
  return mask;
}

struct Hypothesis {
  ModelParams params;
  double neg_log_likelihood;
};

/// Distance to the model treated as a curve in 3D (codimension 2 for both
/// classes). The revolute model residual proper (distance to the cylinder)
/// leaves the position along the axis free, which makes hypotheses
/// non-identifiable for ranking and lets far-away outliers into the
/// refinement set; ranking and masking therefore use the circle curve.
std::vector<double> curve_residuals(const ModelParams& params,
                                    const Trajectory3& traj) {
  if (const auto* rev = std::get_if<RevoluteParams>(&params)) {
    std::vector<double> out;
    out.reserve(traj.size());
    for (const TimedPoint& s : traj.samples) {
      const Vec3 w = s.p - rev->center;
      const double h = w.dot(rev->axis);
      const double rho = (w - h * rev->axis).norm();
      out.push_back(std::hypot(rho - rev->radius, h));
    }
    return out;
  }
  return residuals(params, traj);
}

}  // namespace

void MlesacConfig::validate() const {
  if (iterations < 1) {
    throw Error(Errc::InvalidSpec, "mlesac iterations must be >= 1");
  }
  if (!(sigma > 0.0)) {
    throw Error(Errc::InvalidSpec, "mlesac sigma must be positive");
  }
  if (!(nu > sigma)) {
    throw Error(Errc::InvalidSpec, "mlesac nu must exceed sigma");
  }
  if (em_steps < 1) {
    throw Error(Errc::InvalidSpec, "mlesac em_steps must be >= 1");
  }
}

MixtureScore score_hypothesis(std::span<const double> residuals,
                              const MlesacConfig& cfg) {
  return score_hypothesis(residuals, cfg, 1);
}

MixtureScore score_hypothesis(std::span<const double> residuals,
                              const MlesacConfig& cfg, int codim) {
  if (residuals.empty()) {
    throw Error(Errc::InvalidSpec, "cannot score an empty residual set");
  }
  double gamma = 0.5;
  for (int step = 0; step < cfg.em_steps; ++step) {
    double sum = 0.0;
    for (const double r : residuals) {
      const double norm = std::pow(kTwoPi * cfg.sigma * cfg.sigma,
                                   -0.5 * static_cast<double>(codim));
      const double gauss =
          norm * std::exp(-r * r / (2.0 * cfg.sigma * cfg.sigma));
      const double inlier = gamma * gauss;
      const double outlier = (1.0 - gamma) / cfg.nu;
      const double denom = inlier + outlier;
      sum += denom > 0.0 ? inlier / denom : 0.0;
    }
    gamma = sum / static_cast<double>(residuals.size());
  }
  double nll = 0.0;
  for (const double r : residuals) {
    const double p = mixture_density(r, gamma, cfg.sigma, cfg.nu, codim);
    nll -= std::log(std::max(p, 1e-300));
  }
  return MixtureScore{nll, gamma};
}

FitResult score_fit(FitResult fit, const MlesacConfig& cfg) {
  if (fit.model_class == ModelClass::Free) {
    throw Error(Errc::InvalidSpec,
                "free motion is scored analytically, not by the mixture");
  }
  const MixtureScore score = score_hypothesis(
      fit.residuals, cfg, model_codim(fit.model_class));
  fit.log_likelihood = -score.neg_log_likelihood;
  fit.gamma = score.gamma;
  fit.inlier_mask =
      threshold_mask(fit.residuals, cfg.effective_inlier_threshold());
  return fit;
}

FitResult estimate(const Trajectory3& traj, ModelClass cls,
                   const MlesacConfig& cfg) {
  cfg.validate();
  if (cls != ModelClass::Prismatic && cls != ModelClass::Revolute) {
    throw Error(Errc::InvalidSpec,
                "robust estimation covers prismatic and revolute classes");
  }
  const std::size_t minimal = cls == ModelClass::Prismatic ? 2 : 3;
  const std::size_t n = traj.size();
  if (n < minimal) {
    throw Error(Errc::InsufficientData,
                "trajectory is shorter than the minimal sample");
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const auto draw_distinct = [&](std::size_t count) {
    std::array<std::size_t, 3> idx{};
    for (std::size_t i = 0; i < count; ++i) {
      bool fresh = false;
      while (!fresh) {
        idx[i] = pick(rng);
        fresh = true;
        for (std::size_t j = 0; j < i; ++j) {
          fresh = fresh && idx[j] != idx[i];
        }
      }
    }
    return idx;
  };

  std::optional<Hypothesis> best;
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const auto idx = draw_distinct(minimal);
    std::optional<ModelParams> params;
    if (cls == ModelClass::Prismatic) {
      if (auto fit =
              try_fit_prismatic_minimal(traj.point(idx[0]), traj.point(idx[1]))) {
        params = *fit;
      }
    } else {
      if (auto fit = try_fit_revolute_minimal(
              traj.point(idx[0]), traj.point(idx[1]), traj.point(idx[2]))) {
        params = *fit;
      }
    }
    if (!params) {
      continue;  // degenerate draw, budget still spent
    }
    const std::vector<double> res = curve_residuals(*params, traj);
    const MixtureScore score = score_hypothesis(res, cfg, 2);
    if (!best || score.neg_log_likelihood < best->neg_log_likelihood) {
      best = Hypothesis{*params, score.neg_log_likelihood};
    }
  }
  if (!best) {
    throw Error(Errc::NoValidHypothesis,
                "every sampled minimal set was degenerate");
  }

  // Alternate masking and least squares a few times: the minimal
  // hypothesis is offset by its own sample noise, so its band clips good
  // points that the refined model recovers on the next pass.
  constexpr int kRefineRounds = 3;
  ModelParams final_params = best->params;
  for (int round = 0; round < kRefineRounds; ++round) {
    const std::vector<std::uint8_t> mask = threshold_mask(
        curve_residuals(final_params, traj), cfg.effective_inlier_threshold());
    try {
      if (cls == ModelClass::Prismatic) {
        final_params = refine_prismatic(traj, mask);
      } else {
        final_params = refine_revolute(traj, mask);
      }
    } catch (const Error&) {
      if (round == 0) {
        final_params = best->params;  // keep the raw hypothesis
      }
      break;
    }
  }

  // Keep whichever of {refined, raw hypothesis} explains the data better,
  // so refinement can never make things worse. Candidates are compared on
  // the curve residual for the same identifiability reason as above.
  const auto guard_score = [&](const ModelParams& params) {
    return score_hypothesis(curve_residuals(params, traj), cfg, 2)
        .neg_log_likelihood;
  };
  if (guard_score(best->params) < guard_score(final_params)) {
    final_params = best->params;
  }

  FitResult fit;
  fit.model_class = cls;
  fit.params = final_params;
  fit.residuals = residuals(final_params, traj);
  fit.dof = model_dof(cls);
  return score_fit(std::move(fit), cfg);
}

}  // namespace ctd
