#pragma once

#include <cstdint>
#include <span>

#include "ctd/artmodel.hpp"

namespace ctd {

/// Tuning of the robust estimator. The inlier noise is modelled as a
/// zero-mean Gaussian with std dev `sigma`; outliers as uniform over a
/// span of `nu` meters. Every run is replayable from `seed`.
struct MlesacConfig {
  int iterations = 200;
  double sigma = 0.005;        // meters
  double nu = 1.0;             // meters, uniform outlier support
  int em_steps = 5;
  std::uint64_t seed = 0;
  double inlier_threshold = 0; // meters; <= 0 selects the default 2.5*sigma

  double effective_inlier_threshold() const {
    return inlier_threshold > 0.0 ? inlier_threshold : 2.5 * sigma;
  }

  /// Throws Errc::InvalidSpec when a field is out of range.
  void validate() const;
};

/// Negative log likelihood of a residual set under the two-component
/// mixture, with the inlier mixing weight fitted by EM.
struct MixtureScore {
  double neg_log_likelihood = 0.0;  // nats
  double gamma = 0.5;               // in [0, 1]
};

/// Scores residuals against gamma*N(r; 0, sigma) + (1-gamma)/nu, running
/// `em_steps` EM rounds for gamma from 0.5. `codim` widens the Gaussian to
/// the residual's true dimensionality ((2*pi*sigma^2)^(-codim/2) normaliser);
/// the two-argument form is the plain 1D scalar-residual score.
MixtureScore score_hypothesis(std::span<const double> residuals,
                              const MlesacConfig& cfg);
MixtureScore score_hypothesis(std::span<const double> residuals,
                              const MlesacConfig& cfg, int codim);

/// Fills log_likelihood, gamma and the inlier mask of a geometric fit from
/// its residuals, using the codimension of its class.
FitResult score_fit(FitResult fit, const MlesacConfig& cfg);

/// MLESAC: samples minimal hypotheses (2 points for prismatic, 3 for
/// revolute), keeps the one with the lowest mixture score, refines on its
/// inliers and rescores. Deterministic for a fixed (traj, cls, cfg).
/// Throws Errc::InsufficientData and Errc::NoValidHypothesis; cls outside
/// {Prismatic, Revolute} is Errc::InvalidSpec.
FitResult estimate(const Trajectory3& traj, ModelClass cls,
                   const MlesacConfig& cfg);

}  // namespace ctd
