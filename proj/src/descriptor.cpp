#include "ctd/descriptor.hpp"

#include <cmath>

#include "json_util.hpp"

namespace ctd {

namespace {

/// Unwrapped rotation between consecutive masked samples about the axis.
/// Summing increments keeps sweeps beyond a half turn intact and lets the
/// per-step noise cancel telescopically.
double swept_angle(const RevoluteParams& model, const Trajectory3& traj,
                   const std::vector<std::uint8_t>& mask) {
  double total = 0.0;
  bool have_prev = false;
  Vec3 prev = Vec3::Zero();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (!mask.empty() && !mask[i]) {
      continue;
    }
    const Vec3 d = traj.point(i) - model.center;
    Vec3 radial = d - d.dot(model.axis) * model.axis;
    const double len = radial.norm();
    if (len < 1e-9) {
      continue;
    }
    radial /= len;
    if (have_prev) {
      total += std::atan2(prev.cross(radial).dot(model.axis), prev.dot(radial));
    }
    prev = radial;
    have_prev = true;
  }
  return total;
}

double travel_distance(const PrismaticParams& model, const Trajectory3& traj,
                       const std::vector<std::uint8_t>& mask) {
  bool have_first = false;
  Vec3 first = Vec3::Zero();
  Vec3 last = Vec3::Zero();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (!mask.empty() && !mask[i]) {
      continue;
    }
    if (!have_first) {
      first = traj.point(i);
      have_first = true;
    }
    last = traj.point(i);
  }
  return have_first ? (last - first).dot(model.direction) : 0.0;
}

Json model_json(ModelClass cls, const ModelParams& params) {
  Json j;
  j["class"] = model_class_name(cls);
  if (const auto* rigid = std::get_if<RigidParams>(&params)) {
    j["anchor"] = vec3_json(rigid->anchor);
  } else if (const auto* pris = std::get_if<PrismaticParams>(&params)) {
    j["origin"] = vec3_json(pris->origin);
    j["direction"] = vec3_json(pris->direction);
  } else if (const auto* rev = std::get_if<RevoluteParams>(&params)) {
    j["center"] = vec3_json(rev->center);
    j["axis"] = vec3_json(rev->axis);
    j["radius"] = rev->radius;
  }
  return j;
}

std::pair<ModelClass, ModelParams> model_from_json(const Json& j,
                                                   const std::string& path) {
  const std::string name =
      as_string(require_field(j, path, "class"), join_path(path, "class"));
  const auto cls = model_class_from_name(name);
  if (!cls) {
    throw Error::schema(join_path(path, "class"), "unknown model class");
  }
  switch (*cls) {
    case ModelClass::Rigid: {
      check_keys(j, path, {"class", "anchor"});
      RigidParams p{as_vec3(require_field(j, path, "anchor"),
                            join_path(path, "anchor"))};
      return {*cls, p};
    }
    case ModelClass::Prismatic: {
      check_keys(j, path, {"class", "origin", "direction"});
      PrismaticParams p{
          as_vec3(require_field(j, path, "origin"), join_path(path, "origin")),
          as_vec3(require_field(j, path, "direction"),
                  join_path(path, "direction"))};
      if (std::abs(p.direction.norm() - 1.0) > 1e-9) {
        throw Error::schema(join_path(path, "direction"), "must be unit length");
      }
      return {*cls, p};
    }
    case ModelClass::Revolute: {
      check_keys(j, path, {"class", "center", "axis", "radius"});
      RevoluteParams p{
          as_vec3(require_field(j, path, "center"), join_path(path, "center")),
          as_vec3(require_field(j, path, "axis"), join_path(path, "axis")),
          as_double(require_field(j, path, "radius"),
                    join_path(path, "radius"))};
      if (std::abs(p.axis.norm() - 1.0) > 1e-9) {
        throw Error::schema(join_path(path, "axis"), "must be unit length");
      }
      if (!(p.radius > 0.0) || p.radius > kMaxRevoluteRadius) {
        throw Error::schema(join_path(path, "radius"), "out of range");
      }
      return {*cls, p};
    }
    case ModelClass::Free:
      check_keys(j, path, {"class"});
      return {*cls, FreeParams{}};
  }
  throw Error::schema(join_path(path, "class"), "unknown model class");
}

Json rule_json(const RefFrameRule& rule) {
  Json j;
  j["class"] = model_class_name(rule.model_class);
  if (rule.model_class == ModelClass::Revolute) {
    j["edge_class"] = edge_class_name(rule.edge_class);
    j["grasp_axis_dist_norm"] = rule.grasp_axis_dist_norm;
  } else {
    j["direction_px"] = vec2_json(rule.direction_px);
  }
  return j;
}

RefFrameRule rule_from_json(const Json& j, const std::string& path) {
  const std::string name =
      as_string(require_field(j, path, "class"), join_path(path, "class"));
  RefFrameRule rule;
  if (name == "revolute") {
    check_keys(j, path, {"class", "edge_class", "grasp_axis_dist_norm"});
    rule.model_class = ModelClass::Revolute;
    const std::string edge = as_string(require_field(j, path, "edge_class"),
                                       join_path(path, "edge_class"));
    const auto cls = edge_class_from_name(edge);
    if (!cls) {
      throw Error::schema(join_path(path, "edge_class"),
                          "expected longer or shorter");
    }
    rule.edge_class = *cls;
    rule.grasp_axis_dist_norm =
        as_double(require_field(j, path, "grasp_axis_dist_norm"),
                  join_path(path, "grasp_axis_dist_norm"));
  } else if (name == "prismatic") {
    check_keys(j, path, {"class", "direction_px"});
    rule.model_class = ModelClass::Prismatic;
    rule.direction_px = as_vec2(require_field(j, path, "direction_px"),
                                join_path(path, "direction_px"));
  } else {
    throw Error::schema(join_path(path, "class"),
                        "rule class must be revolute or prismatic");
  }
  return rule;
}

Json selection_json(const SelectionSummary& s) {
  Json j;
  for (const auto& e : s.entries) {
    Json entry;
    entry["fitted"] = e.fitted;
    if (e.fitted) {
      entry["bic"] = e.bic;
      entry["posterior"] = e.posterior;
    } else {
      entry["reason"] = e.failure_reason;
    }
    j[model_class_name(e.model_class)] = entry;
  }
  return j;
}

SelectionSummary selection_from_json(const Json& j, const std::string& path) {
  check_keys(j, path, {"rigid", "prismatic", "revolute", "free"});
  SelectionSummary s;
  const std::array<ModelClass, 4> order = {ModelClass::Rigid,
                                           ModelClass::Prismatic,
                                           ModelClass::Revolute,
                                           ModelClass::Free};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::string key = model_class_name(order[i]);
    const std::string epath = join_path(path, key);
    const Json& entry = require_field(j, path, key);
    SelectionSummary::Entry& e = s.entries[i];
    e.model_class = order[i];
    e.fitted = as_bool(require_field(entry, epath, "fitted"),
                       join_path(epath, "fitted"));
    if (e.fitted) {
      check_keys(entry, epath, {"fitted", "bic", "posterior"});
      e.bic = as_double(require_field(entry, epath, "bic"),
                        join_path(epath, "bic"));
      e.posterior = as_double(require_field(entry, epath, "posterior"),
                              join_path(epath, "posterior"));
    } else {
      check_keys(entry, epath, {"fitted", "reason"});
      e.failure_reason = as_string(require_field(entry, epath, "reason"),
                                   join_path(epath, "reason"));
    }
  }
  return s;
}

}  // namespace

SelectionSummary summarize(const SelectionReport& report) {
  SelectionSummary s;
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const ClassReport& c = report.classes[i];
    SelectionSummary::Entry& e = s.entries[i];
    e.model_class = c.model_class;
    e.fitted = c.fitted();
    if (c.fitted()) {
      e.bic = *c.bic;
      e.posterior = c.posterior;
    } else {
      e.failure_reason = c.failure_reason;
    }
  }
  return s;
}

TaskDescriptor assemble(const SceneAnnotation& scene, const Trajectory3& traj,
                        const SelectionReport& selection,
                        const std::optional<RefFrameRule>& rule,
                        const AssembleOptions& options) {
  const ClassReport& winner = selection.winning();
  if (!winner.fitted()) {
    throw Error(Errc::InvalidSpec, "selection winner has no fit");
  }
  const bool executable_class = winner.model_class == ModelClass::Prismatic ||
                                winner.model_class == ModelClass::Revolute;
  if (options.require_executable && (!executable_class || !rule)) {
    throw Error(Errc::NonExecutableModel,
                std::string("selected model '") +
                    model_class_name(winner.model_class) +
                    "' cannot drive an end effector");
  }

  TaskDescriptor d;
  d.object_label = scene.label;
  d.grasp.px = scene.grasp;
  d.grasp.position = scene.grasp.has_depth()
                         ? deproject(scene.grasp, scene.intrinsics)
                         : Vec3::Zero();
  d.grasp.orientation = scene.grasp_orientation;
  d.bbox = scene.bbox;
  d.model_class = winner.model_class;
  d.model_params = winner.fit->params;
  d.ref_rule = executable_class ? rule : std::nullopt;

  d.provenance.recording_id = options.recording_id;
  d.provenance.sample_count = selection.sample_count;
  d.provenance.duration_s = traj.duration();
  d.provenance.selection = summarize(selection);
  if (winner.model_class == ModelClass::Revolute) {
    d.provenance.swept_value =
        swept_angle(std::get<RevoluteParams>(winner.fit->params), traj,
                    winner.fit->inlier_mask);
  } else if (winner.model_class == ModelClass::Prismatic) {
    d.provenance.swept_value =
        travel_distance(std::get<PrismaticParams>(winner.fit->params), traj,
                        winner.fit->inlier_mask);
  }
  return d;
}

std::string serialize(const TaskDescriptor& d) {
  Json j;
  j["version"] = d.version;
  j["object"] = d.object_label;
  Json grasp;
  grasp["px"] = pixel_json(d.grasp.px);
  grasp["position"] = vec3_json(d.grasp.position);
  if (d.grasp.orientation) {
    grasp["orientation"] = Json::array(
        {(*d.grasp.orientation)[0], (*d.grasp.orientation)[1],
         (*d.grasp.orientation)[2], (*d.grasp.orientation)[3]});
  }
  j["grasp"] = grasp;
  j["bbox"] = bbox_json(d.bbox);
  j["model"] = model_json(d.model_class, d.model_params);
  j["ref_rule"] = d.ref_rule ? rule_json(*d.ref_rule) : Json(nullptr);
  Json prov;
  prov["recording_id"] = d.provenance.recording_id;
  prov["sample_count"] = d.provenance.sample_count;
  prov["duration_s"] = d.provenance.duration_s;
  prov["swept_value"] = d.provenance.swept_value;
  prov["selection"] = selection_json(d.provenance.selection);
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

TaskDescriptor parse_descriptor(const std::string& text) {
  const Json j = parse_json_text(text);
  check_keys(j, "", {"version", "object", "grasp", "bbox", "model", "ref_rule",
                     "provenance"});
  const long long version =
      as_integer(require_field(j, "", "version"), "version");
  if (version != kDescriptorVersion) {
    throw Error(Errc::VersionMismatch,
                "descriptor version " + std::to_string(version) +
                    " is not supported (expected " +
                    std::to_string(kDescriptorVersion) + ")");
  }

  TaskDescriptor d;
  d.version = static_cast<int>(version);
  d.object_label = as_string(require_field(j, "", "object"), "object");

  const Json& grasp = require_field(j, "", "grasp");
  check_keys(grasp, "grasp", {"px", "position", "orientation"});
  d.grasp.px = pixel_from_json(require_field(grasp, "grasp", "px"), "grasp.px");
  d.grasp.position =
      as_vec3(require_field(grasp, "grasp", "position"), "grasp.position");
  if (grasp.contains("orientation")) {
    d.grasp.orientation = as_quat(grasp["orientation"], "grasp.orientation");
  }

  d.bbox = bbox_from_json(require_field(j, "", "bbox"), "bbox");
  std::tie(d.model_class, d.model_params) =
      model_from_json(require_field(j, "", "model"), "model");

  const Json& rule = require_field(j, "", "ref_rule");
  if (!rule.is_null()) {
    d.ref_rule = rule_from_json(rule, "ref_rule");
    if (d.ref_rule->model_class != d.model_class) {
      throw Error::schema("ref_rule.class",
                          "rule class must match the model class");
    }
  }

  const Json& prov = require_field(j, "", "provenance");
  check_keys(prov, "provenance",
             {"recording_id", "sample_count", "duration_s", "swept_value",
              "selection"});
  d.provenance.recording_id =
      as_string(require_field(prov, "provenance", "recording_id"),
                "provenance.recording_id");
  const long long count =
      as_integer(require_field(prov, "provenance", "sample_count"),
                 "provenance.sample_count");
  if (count < 0) {
    throw Error::schema("provenance.sample_count", "must be non-negative");
  }
  d.provenance.sample_count = static_cast<std::size_t>(count);
  d.provenance.duration_s =
      as_double(require_field(prov, "provenance", "duration_s"),
                "provenance.duration_s");
  d.provenance.swept_value =
      as_double(require_field(prov, "provenance", "swept_value"),
                "provenance.swept_value");
  d.provenance.selection = selection_from_json(
      require_field(prov, "provenance", "selection"), "provenance.selection");
  return d;
}

}  // namespace ctd
