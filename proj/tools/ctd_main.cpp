#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ctd/cli.hpp"
#include "ctd/recording.hpp"

namespace {

constexpr double kDegToRad = 0.017453292519943295;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained-task descriptors: learn articulated-object "
               "manipulation from a tracked demonstration and generalize it "
               "to novel objects"};
  app.require_subcommand(1);

  // ---- learn ----
  ctd::LearnOptions learn;
  auto* learn_cmd = app.add_subcommand(
      "learn", "Fit articulation models to a recording and write the task "
               "descriptor");
  learn_cmd->add_option("--input", learn.input, "recording file")->required();
  learn_cmd->add_option("--output", learn.output, "descriptor file")
      ->required();
  learn_cmd->add_option("--report", learn.report_path,
                        "also write the text report here");
  learn_cmd->add_option("--overlay", learn.overlay_base,
                        "write <base>.svg and <base>.txt plot overlays");
  learn_cmd->add_option("--seed", learn.config.seed, "robust estimator seed");
  learn_cmd->add_option("--iterations", learn.config.iterations,
                        "MLESAC iterations");
  learn_cmd->add_option("--sigma", learn.config.sigma,
                        "inlier noise std dev (m)");
  learn_cmd->add_option("--nu", learn.config.nu, "outlier span (m)");
  learn_cmd->add_option("--em-steps", learn.config.em_steps,
                        "EM rounds for the mixing weight");
  learn_cmd->add_option("--inlier-threshold", learn.config.inlier_threshold,
                        "inlier residual threshold (m, default 2.5*sigma)");

  // ---- generalize ----
  ctd::GeneralizeOptions gen;
  double sweep_flag = 0.0;
  double duration_flag = 0.0;
  auto* gen_cmd = app.add_subcommand(
      "generalize",
      "Apply a learned descriptor to a novel scene and emit waypoints");
  gen_cmd->add_option("--descriptor", gen.descriptor_path, "descriptor file")
      ->required();
  gen_cmd->add_option("--scene", gen.scene_path, "scene annotation file")
      ->required();
  gen_cmd->add_option("--output", gen.output, "waypoint file")->required();
  gen_cmd->add_option("--overlay", gen.overlay_base,
                      "write <base>.svg and <base>.txt plot overlays");
  gen_cmd->add_option("--waypoints", gen.n_waypoints, "number of waypoints");
  auto* sweep_opt = gen_cmd->add_option(
      "--sweep", sweep_flag, "override sweep (rad for revolute, m for "
                             "prismatic; default: demonstrated value)");
  auto* duration_opt = gen_cmd->add_option(
      "--duration", duration_flag,
      "trajectory duration in seconds (default: demonstrated)");
  gen_cmd->add_option("--world-transform", gen.transform_path,
                      "rigid world_from_camera transform file");

  // ---- simulate ----
  ctd::SimulateOptions sim;
  std::string spec_path;
  std::string cls_name = "revolute";
  std::string hinge_name = "left";
  double sweep_deg = 90.0;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Write a synthetic demonstration recording");
  sim_cmd->add_option("--output", sim.output, "recording file")->required();
  sim_cmd->add_option("--truth", sim.truth_path, "ground-truth sidecar file");
  sim_cmd->add_option("--scene-out", sim.scene_path,
                      "also write the initial scene annotation");
  auto* spec_opt =
      sim_cmd->add_option("--spec", spec_path, "scenario file (JSON)");
  auto* cls_opt = sim_cmd->add_option("--class", cls_name,
                                      "rigid | prismatic | revolute");
  auto* n_opt = sim_cmd->add_option("--n", sim.spec.n_samples, "sample count");
  auto* rate_opt =
      sim_cmd->add_option("--rate", sim.spec.rate_hz, "sampling rate (Hz)");
  auto* sigma_opt = sim_cmd->add_option("--sigma", sim.spec.noise_sigma,
                                        "noise std dev (m)");
  auto* of_opt = sim_cmd->add_option("--outlier-fraction",
                                     sim.spec.outlier_fraction,
                                     "fraction of outlier samples");
  auto* os_opt = sim_cmd->add_option("--outlier-span", sim.spec.outlier_span,
                                     "outlier box side (m)");
  auto* seed_opt = sim_cmd->add_option("--seed", sim.spec.seed, "RNG seed");
  auto* sweep_deg_opt = sim_cmd->add_option("--sweep-deg", sweep_deg,
                                            "revolute sweep (degrees)");
  auto* travel_opt =
      sim_cmd->add_option("--travel", sim.spec.travel, "prismatic travel (m)");
  auto* bw_opt = sim_cmd->add_option("--book-width", sim.spec.layout.width,
                                     "object width (m)");
  auto* bh_opt = sim_cmd->add_option("--book-height", sim.spec.layout.height,
                                     "object height (m)");
  auto* bd_opt = sim_cmd->add_option("--book-depth", sim.spec.layout.depth,
                                     "object plane depth (m)");
  auto* bx_opt = sim_cmd->add_option("--book-cx", sim.spec.layout.center_x,
                                     "object center x (m)");
  auto* by_opt = sim_cmd->add_option("--book-cy", sim.spec.layout.center_y,
                                     "object center y (m)");
  auto* hinge_opt = sim_cmd->add_option("--hinge", hinge_name,
                                        "top | bottom | left | right");
  auto* gs_opt = sim_cmd->add_option("--grasp-s", sim.spec.layout.grasp_s,
                                     "grasp position along the free edge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage errors share the parse-failure code
  }

  try {
    if (learn_cmd->parsed()) {
      return ctd::run_learn(learn, std::cout, std::cerr);
    }
    if (gen_cmd->parsed()) {
      if (sweep_opt->count() > 0) {
        gen.sweep = sweep_flag;
      }
      if (duration_opt->count() > 0) {
        gen.duration_s = duration_flag;
      }
      return ctd::run_generalize(gen, std::cout, std::cerr);
    }
    // simulate: a spec file provides the base scenario, explicit flags win.
    if (spec_opt->count() > 0) {
      ctd::SynthSpec merged =
          ctd::parse_synth_spec(ctd::read_file(spec_path));
      if (n_opt->count() > 0) merged.n_samples = sim.spec.n_samples;
      if (rate_opt->count() > 0) merged.rate_hz = sim.spec.rate_hz;
      if (sigma_opt->count() > 0) merged.noise_sigma = sim.spec.noise_sigma;
      if (of_opt->count() > 0) merged.outlier_fraction = sim.spec.outlier_fraction;
      if (os_opt->count() > 0) merged.outlier_span = sim.spec.outlier_span;
      if (seed_opt->count() > 0) merged.seed = sim.spec.seed;
      if (travel_opt->count() > 0) merged.travel = sim.spec.travel;
      if (bw_opt->count() > 0) merged.layout.width = sim.spec.layout.width;
      if (bh_opt->count() > 0) merged.layout.height = sim.spec.layout.height;
      if (bd_opt->count() > 0) merged.layout.depth = sim.spec.layout.depth;
      if (bx_opt->count() > 0) merged.layout.center_x = sim.spec.layout.center_x;
      if (by_opt->count() > 0) merged.layout.center_y = sim.spec.layout.center_y;
      if (gs_opt->count() > 0) merged.layout.grasp_s = sim.spec.layout.grasp_s;
      sim.spec = merged;
    }
    if (cls_opt->count() > 0) {
      const auto cls = ctd::model_class_from_name(cls_name);
      if (!cls) {
        std::cerr << "error: InvalidSpec: unknown class '" << cls_name
                  << "'\n";
        return 2;
      }
      sim.spec.model_class = *cls;
    }
    if (hinge_opt->count() > 0) {
      const auto hinge = ctd::hinge_side_from_name(hinge_name);
      if (!hinge) {
        std::cerr << "error: InvalidSpec: unknown hinge side '" << hinge_name
                  << "'\n";
        return 2;
      }
      sim.spec.layout.hinge = *hinge;
    }
    if (sweep_deg_opt->count() > 0) {
      sim.spec.sweep = sweep_deg * kDegToRad;
    }
    return ctd::run_simulate(sim, std::cout, std::cerr);
  } catch (const ctd::Error& e) {
    std::cerr << e.formatted() << "\n";
    return ctd::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 1;
  }
}
