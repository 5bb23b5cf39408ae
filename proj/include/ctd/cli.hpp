#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ctd/mlesac.hpp"
#include "ctd/synth.hpp"

namespace ctd {

// Exit codes shared by every subcommand:
//   0 success, 2 parse/spec failure, 3 insufficient data,
//   4 non-executable model, 5 geometry failure.
int exit_code_for(Errc code);

struct LearnOptions {
  std::string input;
  std::string output;
  std::string report_path;    // optional
  std::string overlay_base;   // optional; writes <base>.svg and <base>.txt
  MlesacConfig config;
};

struct GeneralizeOptions {
  std::string descriptor_path;
  std::string scene_path;
  std::string output;
  std::string overlay_base;       // optional
  std::string transform_path;     // optional world_from_camera
  int n_waypoints = 50;
  std::optional<double> sweep;
  std::optional<double> duration_s;
};

struct SimulateOptions {
  SynthSpec spec;
  std::string output;
  std::string truth_path;   // optional sidecar
  std::string scene_path;   // optional scene annotation output
};

int run_learn(const LearnOptions& opt, std::ostream& out, std::ostream& err);
int run_generalize(const GeneralizeOptions& opt, std::ostream& out,
                   std::ostream& err);
int run_simulate(const SimulateOptions& opt, std::ostream& out,
                 std::ostream& err);

}  // namespace ctd
