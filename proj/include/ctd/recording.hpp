#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctd/generalize.hpp"
#include "ctd/scene.hpp"
#include "ctd/synth.hpp"

namespace ctd {

inline constexpr int kRecordingVersion = 1;
inline constexpr int kSceneVersion = 1;

struct RecordingFrame {
  double t = 0.0;
  double u = 0.0;
  double v = 0.0;
  double d = 0.0;  // meters; 0 = no depth
  BBox bbox;
};

/// One demonstration as written by the tracker: header plus per-frame
/// grasp pixel, depth and bounding box. An optional precomputed 3D
/// trajectory bypasses deprojection when present.
struct Recording {
  int version = kRecordingVersion;
  std::string object_label;
  double rate_hz = 20.0;
  Intrinsics intrinsics;
  std::vector<RecordingFrame> frames;
  std::vector<PixelDepth> depth_patch;                     // optional
  std::optional<std::array<double, 4>> grasp_orientation;  // optional, wxyz
  std::vector<TimedPoint> trajectory;                      // optional
};

std::string serialize_recording(const Recording& rec);
Recording parse_recording(const std::string& text);

std::string serialize_scene(const SceneAnnotation& scene);
SceneAnnotation parse_scene(const std::string& text);

/// Grasp-point track of a recording: the precomputed trajectory when
/// present, otherwise frames with valid depth deprojected. Throws
/// Errc::InsufficientData when fewer than 3 usable frames remain.
Trajectory3 trajectory_from_recording(const Recording& rec);

/// Scene annotation of the demonstration's initial state (first frame
/// with valid depth).
SceneAnnotation scene_from_recording(const Recording& rec);

/// Simulated recording: the demo trajectory projected through the layout's
/// intrinsics frame by frame, constant initial bounding box.
Recording make_recording(const SynthSpec& spec, const Demo& demo,
                         const SynthScene& scene);

/// Ground-truth sidecar for test harnesses.
std::string serialize_truth(const SynthSpec& spec, const Demo& demo,
                            const SynthScene& scene);

inline constexpr int kSynthSpecVersion = 1;

/// Scenario file for the simulate command. Unknown fields are rejected;
/// missing ones keep their defaults.
std::string serialize_synth_spec(const SynthSpec& spec);
SynthSpec parse_synth_spec(const std::string& text);

/// Waypoint table, one "t,x,y,z,q" record per line, full precision.
std::string serialize_waypoints(const std::vector<Waypoint>& wps);
std::vector<Waypoint> parse_waypoints(const std::string& text);

std::string serialize_transform(const RigidTransform& t);
RigidTransform parse_transform(const std::string& text);

// Small file helpers (Errc::IoError on failure).
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ctd
