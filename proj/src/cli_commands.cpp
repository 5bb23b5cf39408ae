#include "ctd/cli.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "ctd/descriptor.hpp"
#include "ctd/generalize.hpp"
#include "ctd/overlay.hpp"
#include "ctd/recording.hpp"
#include "ctd/selection.hpp"

namespace ctd {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string vec(const Vec3& v) {
  return "[" + num(v.x()) + ", " + num(v.y()) + ", " + num(v.z()) + "]";
}

constexpr double kRadToDeg = 57.295779513082323;

/// Fitted axis drawn over the initial bounding box, clipped to a fixed
/// metric length either side of the center.
ImageSegment project_axis_segment(const RevoluteParams& model,
                                  const Intrinsics& k) {
  constexpr double kHalfLen = 0.2;  // meters
  Vec3 a3 = model.center - kHalfLen * model.axis;
  Vec3 b3 = model.center + kHalfLen * model.axis;
  if (!(a3.z() > 0.0)) {
    a3 = model.center;
  }
  if (!(b3.z() > 0.0)) {
    b3 = model.center;
  }
  const PixelDepth a = project(a3, k);
  const PixelDepth b = project(b3, k);
  return ImageSegment{{a.u, a.v}, {b.u, b.v}};
}

RefFrameRule prismatic_rule(const PrismaticParams& model,
                            const SceneAnnotation& scene) {
  RefFrameRule rule;
  rule.model_class = ModelClass::Prismatic;
  rule.direction_px = Vec2::Zero();
  constexpr double kStep = 0.05;  // meters
  const Vec3 a3 = deproject(scene.grasp, scene.intrinsics);
  const Vec3 b3 = a3 + kStep * model.direction;
  if (a3.z() > 0.0 && b3.z() > 0.0) {
    const PixelDepth a = project(a3, scene.intrinsics);
    const PixelDepth b = project(b3, scene.intrinsics);
    const Vec2 d(b.u - a.u, b.v - a.v);
    if (d.norm() > 1e-6) {
      rule.direction_px = d.normalized();
    }
  }
  return rule;
}

std::string selection_table(const SelectionReport& sel) {
  std::string text;
  text += "  class       status        bic           logL          gamma    posterior\n";
  for (const ClassReport& c : sel.classes) {
    char line[160];
    if (c.fitted()) {
      std::snprintf(line, sizeof(line),
                    "  %-10s  ok       %12s  %12s  %9s  %9s\n",
                    model_class_name(c.model_class), num(*c.bic).c_str(),
                    num(c.fit->log_likelihood).c_str(),
                    num(c.fit->gamma).c_str(), num(c.posterior).c_str());
    } else {
      std::snprintf(line, sizeof(line), "  %-10s  failed   %s\n",
                    model_class_name(c.model_class), c.failure_reason.c_str());
    }
    text += line;
  }
  return text;
}

std::string describe_params(const ModelParams& params) {
  std::string text;
  if (const auto* rigid = std::get_if<RigidParams>(&params)) {
    text += "  anchor  " + vec(rigid->anchor) + "\n";
  } else if (const auto* pris = std::get_if<PrismaticParams>(&params)) {
    text += "  origin     " + vec(pris->origin) + "\n";
    text += "  direction  " + vec(pris->direction) + "\n";
  } else if (const auto* rev = std::get_if<RevoluteParams>(&params)) {
    text += "  center  " + vec(rev->center) + "\n";
    text += "  axis    " + vec(rev->axis) + "\n";
    text += "  radius  " + num(rev->radius) + " m\n";
  }
  return text;
}

void write_overlay_files(const std::string& base, const Overlay& overlay) {
  write_file(base + ".svg", overlay_svg(overlay));
  write_file(base + ".txt", overlay_text(overlay));
}

int report_error(const Error& e, std::ostream& err) {
  err << e.formatted() << "\n";
  return exit_code_for(e.code());
}

}  // namespace

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::SchemaViolation:
    case Errc::VersionMismatch:
    case Errc::InvalidSpec:
    case Errc::IoError:
      return 2;
    case Errc::InsufficientData:
    case Errc::EmptyTrajectory:
      return 3;
    case Errc::NonExecutableModel:
      return 4;
    default:
      return 5;  // geometry failures
  }
}

int run_learn(const LearnOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const Recording rec = parse_recording(read_file(opt.input));
    const Trajectory3 traj = trajectory_from_recording(rec);
    const SceneAnnotation scene = scene_from_recording(rec);
    const SelectionReport sel = select_model(traj, opt.config);
    const ClassReport& winner = sel.winning();

    std::optional<RefFrameRule> rule;
    if (winner.model_class == ModelClass::Revolute) {
      rule = classify_axis_edge(std::get<RevoluteParams>(winner.fit->params),
                                scene.bbox, scene.grasp, scene.intrinsics);
    } else if (winner.model_class == ModelClass::Prismatic) {
      rule = prismatic_rule(std::get<PrismaticParams>(winner.fit->params),
                            scene);
    }
    const TaskDescriptor desc =
        assemble(scene, traj, sel, rule,
                 AssembleOptions{opt.input, /*require_executable=*/false});

    std::string text;
    text += "recording: " + opt.input + " (" +
            std::to_string(sel.sample_count) + " samples, " +
            num(rec.rate_hz) + " Hz)\n";
    text += "model selection (sigma=" + num(opt.config.sigma) +
            ", nu=" + num(opt.config.nu) +
            ", iterations=" + std::to_string(opt.config.iterations) +
            ", seed=" + std::to_string(opt.config.seed) + "):\n";
    text += selection_table(sel);
    if (sel.stationary_hint) {
      text += "note: trajectory stays within 4*sigma of its centroid\n";
    }
    text += "winner: " + std::string(model_class_name(winner.model_class)) + "\n";
    text += describe_params(winner.fit->params);
    if (winner.model_class == ModelClass::Revolute) {
      text += "  swept angle: " + num(desc.provenance.swept_value) + " rad (" +
              num(desc.provenance.swept_value * kRadToDeg) + " deg)\n";
      text += "  axis edge: " + std::string(edge_class_name(rule->edge_class)) +
              ", furthest from grasp (grasp-axis distance " +
              num(rule->grasp_axis_dist_norm) + " bbox diagonals)\n";
    } else if (winner.model_class == ModelClass::Prismatic) {
      text += "  travel: " + num(desc.provenance.swept_value) + " m\n";
    }

    if (!opt.overlay_base.empty()) {
      Overlay overlay;
      overlay.width = scene.intrinsics.width;
      overlay.height = scene.intrinsics.height;
      overlay.add_rect(scene.bbox, "bbox");
      overlay.add_point(Vec2(scene.grasp.u, scene.grasp.v), "grasp");
      if (winner.model_class == ModelClass::Revolute) {
        const auto& params = std::get<RevoluteParams>(winner.fit->params);
        overlay.add_segment(project_axis_segment(params, scene.intrinsics),
                            "axis");
        const PixelDepth center = project(params.center, scene.intrinsics);
        overlay.add_point(Vec2(center.u, center.v), "center");
      } else if (winner.model_class == ModelClass::Prismatic && rule) {
        const Vec2 g(scene.grasp.u, scene.grasp.v);
        overlay.add_segment(
            ImageSegment{g, g + 60.0 * rule->direction_px}, "axis");
      }
      write_overlay_files(opt.overlay_base, overlay);
      text += "overlay: " + opt.overlay_base + ".svg\n";
    }

    if (!desc.executable()) {
      text += "descriptor: not written (model is not executable)\n";
      out << text;
      if (!opt.report_path.empty()) {
        write_file(opt.report_path, text);
      }
      err << Error(Errc::NonExecutableModel,
                   std::string("selected model '") +
                       model_class_name(winner.model_class) +
                       "' cannot drive an end effector")
                 .formatted()
          << "\n";
      return exit_code_for(Errc::NonExecutableModel);
    }

    write_file(opt.output, serialize(desc));
    text += "descriptor: " + opt.output + "\n";
    out << text;
    if (!opt.report_path.empty()) {
      write_file(opt.report_path, text);
    }
    return 0;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int run_generalize(const GeneralizeOptions& opt, std::ostream& out,
                   std::ostream& err) {
  try {
    GeneralizationRequest req;
    req.descriptor = parse_descriptor(read_file(opt.descriptor_path));
    req.scene = parse_scene(read_file(opt.scene_path));
    req.n_waypoints = opt.n_waypoints;
    req.sweep = opt.sweep;
    req.duration_s = opt.duration_s;
    if (!opt.transform_path.empty()) {
      req.world_from_camera = parse_transform(read_file(opt.transform_path));
    }

    const GeneralizationResult result = generalize(req);
    write_file(opt.output, serialize_waypoints(result.waypoints));

    std::string text;
    text += "descriptor: " + opt.descriptor_path + "\n";
    text += "scene: " + opt.scene_path + " (object '" + req.scene.label + "')\n";
    const GeneralizationReport& rep = result.report;
    if (rep.model_class == ModelClass::Revolute) {
      text += "predicted radius: " + num(rep.predicted_radius_or_travel) + " m\n";
      text += "sweep: " + num(rep.sweep_used) + " rad (" +
              num(rep.sweep_used * kRadToDeg) + " deg)\n";
      text += "grasp-axis distance: " +
              num(rep.grasp_axis_dist_norm_predicted) +
              " bbox diagonals (demonstrated " +
              num(rep.grasp_axis_dist_norm_demonstrated) + ")\n";
    } else {
      text += "travel: " + num(rep.predicted_radius_or_travel) + " m\n";
    }
    text += "frame origin: " + vec(result.frame.origin) + "\n";
    text += "frame Y axis: " + vec(result.frame.y_axis()) + "\n";
    text += "waypoints: " + std::to_string(result.waypoints.size()) + " -> " +
            opt.output + "\n";

    if (!opt.overlay_base.empty()) {
      Overlay overlay;
      overlay.width = req.scene.intrinsics.width;
      overlay.height = req.scene.intrinsics.height;
      overlay.add_rect(req.scene.bbox, "bbox");
      overlay.add_point(rep.grasp_px, "grasp");
      if (rep.model_class == ModelClass::Revolute) {
        overlay.add_segment(rep.axis_px, "axis");
        overlay.add_point(rep.center_px, "center");
      }
      if (!rep.waypoint_px.empty()) {
        overlay.add_polyline(rep.waypoint_px, "waypoints");
      }
      write_overlay_files(opt.overlay_base, overlay);
      text += "overlay: " + opt.overlay_base + ".svg\n";
    }
    out << text;
    return 0;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int run_simulate(const SimulateOptions& opt, std::ostream& out,
                 std::ostream& err) {
  try {
    opt.spec.validate();
    const Demo demo = gen_demo(opt.spec);
    const SynthScene scene = gen_scene(opt.spec);
    const Recording rec = make_recording(opt.spec, demo, scene);
    write_file(opt.output, serialize_recording(rec));

    std::string text;
    text += "class: " + std::string(model_class_name(opt.spec.model_class)) +
            "\n";
    text += "recording: " + opt.output + " (" +
            std::to_string(rec.frames.size()) + " frames at " +
            num(opt.spec.rate_hz) + " Hz)\n";
    if (!opt.truth_path.empty()) {
      write_file(opt.truth_path, serialize_truth(opt.spec, demo, scene));
      text += "truth: " + opt.truth_path + "\n";
    }
    if (!opt.scene_path.empty()) {
      write_file(opt.scene_path, serialize_scene(scene.annotation));
      text += "scene: " + opt.scene_path + "\n";
    }
    out << text;
    return 0;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

}  // namespace ctd
