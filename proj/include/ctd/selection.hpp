#pragma once

#include <array>
#include <optional>
#include <string>

#include "ctd/mlesac.hpp"

namespace ctd {

/// One row of the model-selection table.
struct ClassReport {
  ModelClass model_class = ModelClass::Free;
  std::optional<FitResult> fit;       // nullopt when the class failed to fit
  std::string failure_reason;         // set when !fit
  std::optional<double> bic;
  double posterior = 0.0;             // exp(-BIC/2), normalised over fitted classes

  bool fitted() const { return fit.has_value(); }
};

struct SelectionReport {
  std::array<ClassReport, 4> classes;  // rigid, prismatic, revolute, free
  ModelClass winner = ModelClass::Free;
  bool stationary_hint = false;  // max distance to centroid < 4*sigma
  std::size_t sample_count = 0;

  const ClassReport& of(ModelClass c) const;
  const ClassReport& winning() const { return of(winner); }
};

/// Bayesian information criterion, -2*logL + dof*log(n).
double bic(const FitResult& fit, std::size_t n);

/// Log likelihood of n observations under unconstrained motion: each
/// residual uniform over the outlier span, so -n*log(nu).
double free_log_likelihood(std::size_t n, const MlesacConfig& cfg);

/// Fits all four classes (rigid directly, prismatic and revolute via
/// MLESAC, free analytically), ranks them by BIC and reports posterior
/// weights under a uniform class prior. Requires >= 3 samples
/// (Errc::InsufficientData).
SelectionReport select_model(const Trajectory3& traj, const MlesacConfig& cfg);

}  // namespace ctd
