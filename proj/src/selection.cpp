#include "ctd/selection.hpp"

#include <cmath>

namespace ctd {

namespace {

constexpr std::array<ModelClass, 4> kClassOrder = {
    ModelClass::Rigid, ModelClass::Prismatic, ModelClass::Revolute,
    ModelClass::Free};

std::size_t class_index(ModelClass c) {
  for (std::size_t i = 0; i < kClassOrder.size(); ++i) {
    if (kClassOrder[i] == c) {
      return i;
    }
  }
  return 3;
}

}  // namespace

const ClassReport& SelectionReport::of(ModelClass c) const {
  return classes[class_index(c)];
}

double bic(const FitResult& fit, std::size_t n) {
  return -2.0 * fit.log_likelihood +
         static_cast<double>(fit.dof) * std::log(static_cast<double>(n));
}

double free_log_likelihood(std::size_t n, const MlesacConfig& cfg) {
  return -static_cast<double>(n) * std::log(cfg.nu);
}

SelectionReport select_model(const Trajectory3& traj,
                             const MlesacConfig& cfg) {
  cfg.validate();
  const std::size_t n = traj.size();
  if (n < 3) {
    throw Error(Errc::InsufficientData,
                "model selection needs at least 3 samples");
  }

  SelectionReport report;
  report.sample_count = n;

  FitResult rigid = score_fit(fit_rigid(traj), cfg);
  {
    double max_dev = 0.0;
    const Vec3 anchor = std::get<RigidParams>(rigid.params).anchor;
    for (const TimedPoint& s : traj.samples) {
      max_dev = std::max(max_dev, (s.p - anchor).norm());
    }
    report.stationary_hint = max_dev < 4.0 * cfg.sigma;
  }

  FitResult free_fit;
  free_fit.model_class = ModelClass::Free;
  free_fit.params = FreeParams{};
  free_fit.residuals.assign(n, 0.0);
  free_fit.inlier_mask.assign(n, 1);
  free_fit.log_likelihood = free_log_likelihood(n, cfg);
  free_fit.gamma = 0.0;
  free_fit.dof = model_dof(ModelClass::Free);

  for (std::size_t i = 0; i < kClassOrder.size(); ++i) {
    ClassReport& entry = report.classes[i];
    entry.model_class = kClassOrder[i];
    try {
      switch (kClassOrder[i]) {
        case ModelClass::Rigid:
          entry.fit = rigid;
          break;
        case ModelClass::Prismatic:
        case ModelClass::Revolute:
          entry.fit = estimate(traj, kClassOrder[i], cfg);
          break;
        case ModelClass::Free:
          entry.fit = free_fit;
          break;
      }
    } catch (const Error& e) {
      entry.failure_reason = errc_name(e.code());
    }
    if (entry.fit) {
      entry.bic = bic(*entry.fit, n);
    }
  }

  double best_bic = 0.0;
  bool have_winner = false;
  for (const ClassReport& entry : report.classes) {
    if (entry.bic && (!have_winner || *entry.bic < best_bic)) {
      best_bic = *entry.bic;
      report.winner = entry.model_class;
      have_winner = true;
    }
  }

  double weight_sum = 0.0;
  for (ClassReport& entry : report.classes) {
    if (entry.bic) {
      entry.posterior = std::exp(-0.5 * (*entry.bic - best_bic));
      weight_sum += entry.posterior;
    }
  }
  for (ClassReport& entry : report.classes) {
    if (entry.bic) {
      entry.posterior /= weight_sum;
    }
  }
  return report;
}

}  // namespace ctd
