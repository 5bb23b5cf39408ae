#include "ctd/recording.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace ctd {

namespace {

Json patch_json(const std::vector<PixelDepth>& patch) {
  Json arr = Json::array();
  for (const PixelDepth& p : patch) {
    arr.push_back(pixel_json(p));
  }
  return arr;
}

std::vector<PixelDepth> patch_from_json(const Json& j,
                                        const std::string& path) {
  if (!j.is_array()) {
    throw Error::schema(path, "expected an array");
  }
  std::vector<PixelDepth> patch;
  patch.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    patch.push_back(
        pixel_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return patch;
}

std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double_token(const std::string& tok, const std::string& where) {
  double value = 0.0;
  const auto* begin = tok.data();
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw Error::schema(where, "expected a number, got '" + tok + "'");
  }
  return value;
}

}  // namespace

std::string serialize_recording(const Recording& rec) {
  Json j;
  j["version"] = rec.version;
  j["object"] = rec.object_label;
  j["rate_hz"] = rec.rate_hz;
  j["intrinsics"] = intrinsics_json(rec.intrinsics);
  Json frames = Json::array();
  for (const RecordingFrame& f : rec.frames) {
    Json frame;
    frame["t"] = f.t;
    frame["u"] = f.u;
    frame["v"] = f.v;
    frame["d"] = f.d;
    frame["bbox"] = bbox_json(f.bbox);
    frames.push_back(frame);
  }
  j["frames"] = frames;
  if (!rec.depth_patch.empty()) {
    j["depth_patch"] = patch_json(rec.depth_patch);
  }
  if (rec.grasp_orientation) {
    j["grasp_orientation"] = Json::array(
        {(*rec.grasp_orientation)[0], (*rec.grasp_orientation)[1],
         (*rec.grasp_orientation)[2], (*rec.grasp_orientation)[3]});
  }
  if (!rec.trajectory.empty()) {
    Json traj = Json::array();
    for (const TimedPoint& s : rec.trajectory) {
      Json rec_pt;
      rec_pt["t"] = s.t;
      rec_pt["x"] = s.p.x();
      rec_pt["y"] = s.p.y();
      rec_pt["z"] = s.p.z();
      traj.push_back(rec_pt);
    }
    j["trajectory"] = traj;
  }
  return j.dump(2) + "\n";
}

Recording parse_recording(const std::string& text) {
  const Json j = parse_json_text(text);
  check_keys(j, "",
             {"version", "object", "rate_hz", "intrinsics", "frames",
              "depth_patch", "grasp_orientation", "trajectory"});
  const long long version =
      as_integer(require_field(j, "", "version"), "version");
  if (version != kRecordingVersion) {
    throw Error(Errc::VersionMismatch,
                "recording version " + std::to_string(version) +
                    " is not supported");
  }
  Recording rec;
  rec.version = static_cast<int>(version);
  rec.object_label = as_string(require_field(j, "", "object"), "object");
  rec.rate_hz = as_double(require_field(j, "", "rate_hz"), "rate_hz");
  if (!(rec.rate_hz > 0.0)) {
    throw Error::schema("rate_hz", "must be positive");
  }
  rec.intrinsics =
      intrinsics_from_json(require_field(j, "", "intrinsics"), "intrinsics");

  const Json& frames = require_field(j, "", "frames");
  if (!frames.is_array()) {
    throw Error::schema("frames", "expected an array");
  }
  double prev_t = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string path = "frames[" + std::to_string(i) + "]";
    const Json& f = frames[i];
    check_keys(f, path, {"t", "u", "v", "d", "bbox"});
    RecordingFrame frame;
    frame.t = as_double(require_field(f, path, "t"), join_path(path, "t"));
    frame.u = as_double(require_field(f, path, "u"), join_path(path, "u"));
    frame.v = as_double(require_field(f, path, "v"), join_path(path, "v"));
    frame.d = as_double(require_field(f, path, "d"), join_path(path, "d"));
    frame.bbox =
        bbox_from_json(require_field(f, path, "bbox"), join_path(path, "bbox"));
    if (i > 0 && frame.t <= prev_t) {
      throw Error::schema(join_path(path, "t"),
                          "timestamps must be strictly increasing");
    }
    prev_t = frame.t;
    rec.frames.push_back(frame);
  }

  if (j.contains("depth_patch")) {
    rec.depth_patch = patch_from_json(j["depth_patch"], "depth_patch");
  }
  if (j.contains("grasp_orientation")) {
    rec.grasp_orientation = as_quat(j["grasp_orientation"], "grasp_orientation");
  }
  if (j.contains("trajectory")) {
    const Json& traj = j["trajectory"];
    if (!traj.is_array()) {
      throw Error::schema("trajectory", "expected an array");
    }
    double prev = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const std::string path = "trajectory[" + std::to_string(i) + "]";
      const Json& s = traj[i];
      check_keys(s, path, {"t", "x", "y", "z"});
      TimedPoint pt;
      pt.t = as_double(require_field(s, path, "t"), join_path(path, "t"));
      pt.p = Vec3(as_double(require_field(s, path, "x"), join_path(path, "x")),
                  as_double(require_field(s, path, "y"), join_path(path, "y")),
                  as_double(require_field(s, path, "z"), join_path(path, "z")));
      if (i > 0 && pt.t <= prev) {
        throw Error::schema(join_path(path, "t"),
                            "timestamps must be strictly increasing");
      }
      prev = pt.t;
      rec.trajectory.push_back(pt);
    }
  }
  return rec;
}

std::string serialize_scene(const SceneAnnotation& scene) {
  Json j;
  j["version"] = kSceneVersion;
  j["object"] = scene.label;
  j["intrinsics"] = intrinsics_json(scene.intrinsics);
  j["bbox"] = bbox_json(scene.bbox);
  j["grasp"] = pixel_json(scene.grasp);
  if (scene.grasp_orientation) {
    j["grasp_orientation"] = Json::array(
        {(*scene.grasp_orientation)[0], (*scene.grasp_orientation)[1],
         (*scene.grasp_orientation)[2], (*scene.grasp_orientation)[3]});
  }
  j["depth_patch"] = patch_json(scene.depth_patch);
  return j.dump(2) + "\n";
}

SceneAnnotation parse_scene(const std::string& text) {
  const Json j = parse_json_text(text);
  check_keys(j, "",
             {"version", "object", "intrinsics", "bbox", "grasp",
              "grasp_orientation", "depth_patch"});
  const long long version =
      as_integer(require_field(j, "", "version"), "version");
  if (version != kSceneVersion) {
    throw Error(Errc::VersionMismatch,
                "scene version " + std::to_string(version) + " is not supported");
  }
  SceneAnnotation scene;
  scene.label = as_string(require_field(j, "", "object"), "object");
  scene.intrinsics =
      intrinsics_from_json(require_field(j, "", "intrinsics"), "intrinsics");
  scene.bbox = bbox_from_json(require_field(j, "", "bbox"), "bbox");
  scene.grasp = pixel_from_json(require_field(j, "", "grasp"), "grasp");
  if (j.contains("grasp_orientation")) {
    scene.grasp_orientation =
        as_quat(j["grasp_orientation"], "grasp_orientation");
  }
  scene.depth_patch = patch_from_json(require_field(j, "", "depth_patch"),
                                      "depth_patch");
  return scene;
}

Trajectory3 trajectory_from_recording(const Recording& rec) {
  Trajectory3 traj;
  if (!rec.trajectory.empty()) {
    traj.samples = rec.trajectory;
  } else {
    for (const RecordingFrame& f : rec.frames) {
      const PixelDepth px{f.u, f.v, f.d};
      if (px.has_depth()) {
        traj.samples.push_back({f.t, deproject(px, rec.intrinsics)});
      }
    }
  }
  if (traj.size() < 3) {
    throw Error(Errc::InsufficientData,
                "recording has fewer than 3 usable frames");
  }
  return traj;
}

SceneAnnotation scene_from_recording(const Recording& rec) {
  SceneAnnotation scene;
  scene.label = rec.object_label;
  scene.intrinsics = rec.intrinsics;
  scene.grasp_orientation = rec.grasp_orientation;
  scene.depth_patch = rec.depth_patch;
  for (const RecordingFrame& f : rec.frames) {
    const PixelDepth px{f.u, f.v, f.d};
    if (px.has_depth()) {
      scene.bbox = f.bbox;
      scene.grasp = px;
      return scene;
    }
  }
  throw Error(Errc::InsufficientData, "recording has no frame with depth");
}

Recording make_recording(const SynthSpec& spec, const Demo& demo,
                         const SynthScene& scene) {
  Recording rec;
  rec.object_label = scene.annotation.label;
  rec.rate_hz = spec.rate_hz;
  rec.intrinsics = spec.layout.intrinsics;
  rec.depth_patch = scene.annotation.depth_patch;
  for (const TimedPoint& s : demo.traj.samples) {
    RecordingFrame frame;
    frame.t = s.t;
    frame.bbox = scene.annotation.bbox;
    if (s.p.z() > 0.0) {
      const PixelDepth px = project(s.p, rec.intrinsics);
      frame.u = px.u;
      frame.v = px.v;
      frame.d = px.d;
    } else {
      // Tracker lost the point (e.g. an outlier behind the camera).
      frame.u = 0.0;
      frame.v = 0.0;
      frame.d = 0.0;
    }
    rec.frames.push_back(frame);
  }
  return rec;
}

std::string serialize_truth(const SynthSpec& spec, const Demo& demo,
                            const SynthScene& scene) {
  Json j;
  j["class"] = model_class_name(spec.model_class);
  j["seed"] = spec.seed;
  j["noise_sigma"] = spec.noise_sigma;
  j["outlier_fraction"] = spec.outlier_fraction;
  Json model;
  if (const auto* rigid = std::get_if<RigidParams>(&demo.truth.params)) {
    model["anchor"] = vec3_json(rigid->anchor);
  } else if (const auto* pris =
                 std::get_if<PrismaticParams>(&demo.truth.params)) {
    model["origin"] = vec3_json(pris->origin);
    model["direction"] = vec3_json(pris->direction);
  } else if (const auto* rev = std::get_if<RevoluteParams>(&demo.truth.params)) {
    model["center"] = vec3_json(rev->center);
    model["axis"] = vec3_json(rev->axis);
    model["radius"] = rev->radius;
  }
  j["model"] = model;
  j["sweep_or_travel"] = demo.truth.sweep_or_travel;
  Json labels = Json::array();
  for (const std::uint8_t l : demo.truth.inlier_labels) {
    labels.push_back(static_cast<int>(l));
  }
  j["inlier_labels"] = labels;
  Json scene_truth;
  scene_truth["hinge_side"] = hinge_side_name(scene.truth.hinge_side);
  scene_truth["hinge_class"] = edge_class_name(scene.truth.hinge_class);
  scene_truth["center"] = vec3_json(scene.truth.center3);
  scene_truth["radius"] = scene.truth.radius;
  j["scene"] = scene_truth;
  return j.dump(2) + "\n";
}

std::string serialize_synth_spec(const SynthSpec& spec) {
  Json j;
  j["version"] = kSynthSpecVersion;
  j["class"] = model_class_name(spec.model_class);
  j["sweep"] = spec.sweep;
  j["travel"] = spec.travel;
  j["slide_direction"] = vec3_json(spec.slide_direction);
  j["n_samples"] = spec.n_samples;
  j["rate_hz"] = spec.rate_hz;
  j["noise_sigma"] = spec.noise_sigma;
  j["outlier_fraction"] = spec.outlier_fraction;
  j["outlier_span"] = spec.outlier_span;
  j["seed"] = spec.seed;
  Json layout;
  layout["center_x"] = spec.layout.center_x;
  layout["center_y"] = spec.layout.center_y;
  layout["depth"] = spec.layout.depth;
  layout["width"] = spec.layout.width;
  layout["height"] = spec.layout.height;
  layout["hinge"] = hinge_side_name(spec.layout.hinge);
  layout["grasp_s"] = spec.layout.grasp_s;
  layout["patch_grid"] = spec.layout.patch_grid;
  layout["intrinsics"] = intrinsics_json(spec.layout.intrinsics);
  j["layout"] = layout;
  return j.dump(2) + "\n";
}

SynthSpec parse_synth_spec(const std::string& text) {
  const Json j = parse_json_text(text);
  check_keys(j, "",
             {"version", "class", "sweep", "travel", "slide_direction",
              "n_samples", "rate_hz", "noise_sigma", "outlier_fraction",
              "outlier_span", "seed", "layout"});
  const long long version =
      as_integer(require_field(j, "", "version"), "version");
  if (version != kSynthSpecVersion) {
    throw Error(Errc::VersionMismatch,
                "spec version " + std::to_string(version) + " is not supported");
  }
  SynthSpec spec;
  if (j.contains("class")) {
    const std::string name = as_string(j["class"], "class");
    const auto cls = model_class_from_name(name);
    if (!cls) {
      throw Error::schema("class", "unknown model class");
    }
    spec.model_class = *cls;
  }
  if (j.contains("sweep")) spec.sweep = as_double(j["sweep"], "sweep");
  if (j.contains("travel")) spec.travel = as_double(j["travel"], "travel");
  if (j.contains("slide_direction")) {
    spec.slide_direction = as_vec3(j["slide_direction"], "slide_direction");
  }
  if (j.contains("n_samples")) {
    spec.n_samples = static_cast<int>(as_integer(j["n_samples"], "n_samples"));
  }
  if (j.contains("rate_hz")) spec.rate_hz = as_double(j["rate_hz"], "rate_hz");
  if (j.contains("noise_sigma")) {
    spec.noise_sigma = as_double(j["noise_sigma"], "noise_sigma");
  }
  if (j.contains("outlier_fraction")) {
    spec.outlier_fraction = as_double(j["outlier_fraction"], "outlier_fraction");
  }
  if (j.contains("outlier_span")) {
    spec.outlier_span = as_double(j["outlier_span"], "outlier_span");
  }
  if (j.contains("seed")) {
    const long long seed = as_integer(j["seed"], "seed");
    spec.seed = static_cast<std::uint64_t>(seed);
  }
  if (j.contains("layout")) {
    const Json& layout = j["layout"];
    check_keys(layout, "layout",
               {"center_x", "center_y", "depth", "width", "height", "hinge",
                "grasp_s", "patch_grid", "intrinsics"});
    BookLayout& l = spec.layout;
    if (layout.contains("center_x")) {
      l.center_x = as_double(layout["center_x"], "layout.center_x");
    }
    if (layout.contains("center_y")) {
      l.center_y = as_double(layout["center_y"], "layout.center_y");
    }
    if (layout.contains("depth")) {
      l.depth = as_double(layout["depth"], "layout.depth");
    }
    if (layout.contains("width")) {
      l.width = as_double(layout["width"], "layout.width");
    }
    if (layout.contains("height")) {
      l.height = as_double(layout["height"], "layout.height");
    }
    if (layout.contains("hinge")) {
      const std::string side = as_string(layout["hinge"], "layout.hinge");
      const auto hinge = hinge_side_from_name(side);
      if (!hinge) {
        throw Error::schema("layout.hinge", "expected top/bottom/left/right");
      }
      l.hinge = *hinge;
    }
    if (layout.contains("grasp_s")) {
      l.grasp_s = as_double(layout["grasp_s"], "layout.grasp_s");
    }
    if (layout.contains("patch_grid")) {
      l.patch_grid =
          static_cast<int>(as_integer(layout["patch_grid"], "layout.patch_grid"));
    }
    if (layout.contains("intrinsics")) {
      l.intrinsics =
          intrinsics_from_json(layout["intrinsics"], "layout.intrinsics");
    }
  }
  spec.validate();
  return spec;
}

std::string serialize_waypoints(const std::vector<Waypoint>& wps) {
  std::string out = "t,x,y,z,q\n";
  for (const Waypoint& wp : wps) {
    out += format_full(wp.t);
    out += ',';
    out += format_full(wp.position.x());
    out += ',';
    out += format_full(wp.position.y());
    out += ',';
    out += format_full(wp.position.z());
    out += ',';
    out += format_full(wp.joint_value);
    out += '\n';
  }
  return out;
}

std::vector<Waypoint> parse_waypoints(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,x,y,z,q") {
    throw Error::schema("waypoints", "missing 't,x,y,z,q' header");
  }
  std::vector<Waypoint> wps;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::array<double, 5> vals{};
    std::size_t start = 0;
    for (int col = 0; col < 5; ++col) {
      const std::size_t comma = line.find(',', start);
      const bool last = col == 4;
      if (last != (comma == std::string::npos)) {
        throw Error::schema("waypoints[" + std::to_string(row) + "]",
                            "expected 5 comma-separated values");
      }
      const std::string tok =
          line.substr(start, last ? std::string::npos : comma - start);
      vals[static_cast<std::size_t>(col)] = parse_double_token(
          tok, "waypoints[" + std::to_string(row) + "]");
      start = comma + 1;
    }
    wps.push_back(Waypoint{vals[0], Vec3(vals[1], vals[2], vals[3]), vals[4]});
    ++row;
  }
  return wps;
}

std::string serialize_transform(const RigidTransform& t) {
  Json j;
  Json rot = Json::array();
  for (int r = 0; r < 3; ++r) {
    rot.push_back(Json::array(
        {t.rotation(r, 0), t.rotation(r, 1), t.rotation(r, 2)}));
  }
  j["rotation"] = rot;
  j["translation"] = vec3_json(t.translation);
  return j.dump(2) + "\n";
}

RigidTransform parse_transform(const std::string& text) {
  const Json j = parse_json_text(text);
  check_keys(j, "", {"rotation", "translation"});
  const Json& rot = require_field(j, "", "rotation");
  if (!rot.is_array() || rot.size() != 3) {
    throw Error::schema("rotation", "expected 3 rows of 3 numbers");
  }
  RigidTransform t;
  for (std::size_t r = 0; r < 3; ++r) {
    const std::string path = "rotation[" + std::to_string(r) + "]";
    if (!rot[r].is_array() || rot[r].size() != 3) {
      throw Error::schema(path, "expected 3 numbers");
    }
    for (std::size_t c = 0; c < 3; ++c) {
      t.rotation(static_cast<int>(r), static_cast<int>(c)) =
          as_double(rot[r][c], path + "[" + std::to_string(c) + "]");
    }
  }
  t.translation = as_vec3(require_field(j, "", "translation"), "translation");
  const Mat3 gram = t.rotation.transpose() * t.rotation;
  if (!gram.isIdentity(1e-6) || t.rotation.determinant() < 0.0) {
    throw Error::schema("rotation", "must be a proper rotation matrix");
  }
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoError, "cannot open '" + path + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw Error(Errc::IoError, "failed writing '" + path + "'");
  }
}

}  // namespace ctd
