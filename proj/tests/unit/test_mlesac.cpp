#include <random>

#include "ctd/mlesac.hpp"
#include "ctd/synth.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ctd;

TEST_SUITE("mlesac") {

TEST_CASE("config validation") {
  MlesacConfig bad;
  bad.iterations = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = MlesacConfig{};
  bad.sigma = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = MlesacConfig{};
  bad.nu = bad.sigma;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = MlesacConfig{};
  bad.em_steps = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK(MlesacConfig{}.effective_inlier_threshold() ==
        doctest::Approx(0.0125));
}

TEST_CASE("all-zero residuals: gamma converges to 1") {
  MlesacConfig cfg;  // sigma 0.005, nu 1
  const std::vector<double> res(50, 0.0);
  const MixtureScore score = score_hypothesis(res, cfg);

  // Oracle: the same EM on the scalar multiset, run independently.
  const oracles::ScalarEm em{cfg.sigma, cfg.nu, 1};
  double oracle_gamma = 0.0;
  const double oracle_nll = em.run(cfg.em_steps, {{0.0, 50}}, &oracle_gamma);
  CHECK(score.gamma == doctest::Approx(oracle_gamma).epsilon(1e-12));
  CHECK(score.neg_log_likelihood == doctest::Approx(oracle_nll).epsilon(1e-12));

  CHECK(score.gamma > 0.999);
  // Closed form at the converged weight: -n*log(gamma/(sigma*sqrt(2*pi))).
  const double closed =
      -50.0 * std::log(score.gamma / (cfg.sigma * std::sqrt(2.0 * M_PI)));
  CHECK(score.neg_log_likelihood == doctest::Approx(closed).epsilon(1e-6));
}

TEST_CASE("all-huge residuals: pure outlier limit") {
  MlesacConfig cfg;
  const std::vector<double> res(40, 10.0);
  const MixtureScore score = score_hypothesis(res, cfg);
  CHECK(score.gamma < 1e-6);
  CHECK(score.neg_log_likelihood ==
        doctest::Approx(40.0 * std::log(cfg.nu)).epsilon(1e-9));

  cfg.nu = 2.0;
  const MixtureScore wide = score_hypothesis(res, cfg);
  CHECK(wide.neg_log_likelihood ==
        doctest::Approx(40.0 * std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("half clean, half outliers: gamma near one half") {
  MlesacConfig cfg;
  std::vector<double> res(30, 0.0);
  res.insert(res.end(), 30, 10.0);
  const MixtureScore score = score_hypothesis(res, cfg);

  const oracles::ScalarEm em{cfg.sigma, cfg.nu, 1};
  double oracle_gamma = 0.0;
  const double oracle_nll =
      em.run(cfg.em_steps, {{0.0, 30}, {10.0, 30}}, &oracle_gamma);
  CHECK(score.gamma == doctest::Approx(oracle_gamma).epsilon(1e-12));
  CHECK(score.neg_log_likelihood == doctest::Approx(oracle_nll).epsilon(1e-12));
  CHECK(score.gamma == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("codim overload matches the scalar oracle") {
  MlesacConfig cfg;
  std::vector<double> res(20, 0.001);
  res.insert(res.end(), 5, 0.3);
  for (int codim : {1, 2, 3}) {
    const MixtureScore score = score_hypothesis(res, cfg, codim);
    const oracles::ScalarEm em{cfg.sigma, cfg.nu, codim};
    double oracle_gamma = 0.0;
    const double oracle_nll =
        em.run(cfg.em_steps, {{0.001, 20}, {0.3, 5}}, &oracle_gamma);
    CHECK(score.gamma == doctest::Approx(oracle_gamma).epsilon(1e-12));
    CHECK(score.neg_log_likelihood ==
          doctest::Approx(oracle_nll).epsilon(1e-12));
  }
}

TEST_CASE("gamma stays in [0,1] and scores stay finite") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  MlesacConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> res;
    for (int i = 0; i < 30; ++i) {
      res.push_back(u(rng));
    }
    const MixtureScore score = score_hypothesis(res, cfg);
    CHECK(score.gamma >= 0.0);
    CHECK(score.gamma <= 1.0);
    CHECK(std::isfinite(score.neg_log_likelihood));
  }
}

TEST_CASE("estimate recovers a noiseless revolute arc") {
  const Trajectory3 arc = circle_arc(Vec3(0.05, -0.02, 0.95), Vec3(0, 1, 0),
                                     0.15, -M_PI / 2, M_PI / 2, 100, 20.0);
  MlesacConfig cfg;
  const FitResult fit = estimate(arc, ModelClass::Revolute, cfg);
  const auto& p = std::get<RevoluteParams>(fit.params);
  CHECK(std::abs(p.radius - 0.15) < 1e-6);
  CHECK(fit.inlier_count() == 100);

  // Outlier-free equivalence with a direct refine on every sample.
  const RevoluteParams direct = refine_revolute(arc, {});
  CHECK((p.center - direct.center).norm() < 1e-9);
  CHECK(std::abs(p.radius - direct.radius) < 1e-9);

  // Refinement never scores worse than a minimal hypothesis on exact data.
  const RevoluteParams minimal =
      fit_revolute_minimal(arc.point(0), arc.point(50), arc.point(99));
  const MixtureScore minimal_score =
      score_hypothesis(residuals(ModelParams{minimal}, arc), cfg,
                       model_codim(ModelClass::Revolute));
  CHECK(-fit.log_likelihood <= minimal_score.neg_log_likelihood + 1e-9);
}

TEST_CASE("estimate shrugs off 30% outliers") {
  SynthSpec spec;
  spec.model_class = ModelClass::Revolute;
  spec.noise_sigma = 0.002;
  spec.outlier_fraction = 0.3;
  spec.seed = 12;
  const Demo demo = gen_demo(spec);
  MlesacConfig cfg;
  cfg.sigma = 0.002;
  cfg.seed = 99;
  const FitResult fit = estimate(demo.traj, ModelClass::Revolute, cfg);
  const auto& p = std::get<RevoluteParams>(fit.params);
  const auto& truth = std::get<RevoluteParams>(demo.truth.params);
  CHECK(std::abs(p.radius - truth.radius) < 0.005);
  CHECK((p.center - truth.center).norm() < 0.010);

  std::size_t true_inliers = 0;
  std::size_t recovered = 0;
  for (std::size_t i = 0; i < demo.traj.size(); ++i) {
    if (demo.truth.inlier_labels[i]) {
      ++true_inliers;
      recovered += fit.inlier_mask[i];
    }
  }
  CHECK(static_cast<double>(recovered) / true_inliers >= 0.95);
}

TEST_CASE("estimate guards") {
  Trajectory3 single;
  single.samples.push_back({0.0, Vec3(0, 0, 1)});
  CHECK_THROWS_AS(estimate(single, ModelClass::Revolute, MlesacConfig{}),
                  Error);
  try {
    estimate(single, ModelClass::Revolute, MlesacConfig{});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InsufficientData);
  }

  // Coincident samples: every minimal draw is degenerate.
  Trajectory3 stuck;
  for (int i = 0; i < 10; ++i) {
    stuck.samples.push_back({i * 0.05, Vec3(1, 1, 1)});
  }
  try {
    estimate(stuck, ModelClass::Prismatic, MlesacConfig{});
    FAIL("expected NoValidHypothesis");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoValidHypothesis);
  }

  CHECK_THROWS_AS(estimate(stuck, ModelClass::Rigid, MlesacConfig{}), Error);
}

TEST_CASE("estimate is deterministic in the seed") {
  SynthSpec spec;
  spec.model_class = ModelClass::Prismatic;
  spec.noise_sigma = 0.002;
  spec.outlier_fraction = 0.2;
  spec.seed = 5;
  const Demo demo = gen_demo(spec);
  MlesacConfig cfg;
  cfg.seed = 77;
  const FitResult a = estimate(demo.traj, ModelClass::Prismatic, cfg);
  const FitResult b = estimate(demo.traj, ModelClass::Prismatic, cfg);
  const auto& pa = std::get<PrismaticParams>(a.params);
  const auto& pb = std::get<PrismaticParams>(b.params);
  CHECK(pa.origin == pb.origin);
  CHECK(pa.direction == pb.direction);
  CHECK(a.log_likelihood == b.log_likelihood);
  CHECK(a.residuals == b.residuals);
  CHECK(a.inlier_mask == b.inlier_mask);

  cfg.seed = 78;
  const FitResult c = estimate(demo.traj, ModelClass::Prismatic, cfg);
  CHECK(std::isfinite(c.log_likelihood));  // different seed still sane
}

}  // TEST_SUITE
