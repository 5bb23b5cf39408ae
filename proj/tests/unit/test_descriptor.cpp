#include "ctd/descriptor.hpp"

#include "ctd/synth.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace ctd;

namespace {

MlesacConfig tuned() {
  MlesacConfig cfg;
  cfg.sigma = 0.002;
  return cfg;
}

/// Demonstration -> selection -> rule -> descriptor, the learn pipeline in
/// library calls.
TaskDescriptor learn_synthetic(const SynthSpec& spec, SelectionReport* out_sel,
                               bool require_executable = false) {
  const Demo demo = gen_demo(spec);
  const SynthScene scene = gen_scene(spec);
  const SelectionReport sel = select_model(demo.traj, tuned());
  std::optional<RefFrameRule> rule;
  if (sel.winner == ModelClass::Revolute) {
    rule = classify_axis_edge(
        std::get<RevoluteParams>(sel.winning().fit->params),
        scene.annotation.bbox, scene.annotation.grasp,
        scene.annotation.intrinsics);
  } else if (sel.winner == ModelClass::Prismatic) {
    RefFrameRule r;
    r.model_class = ModelClass::Prismatic;
    r.direction_px = Vec2(1.0, 0.0);
    rule = r;
  }
  if (out_sel != nullptr) {
    *out_sel = sel;
  }
  return assemble(scene.annotation, demo.traj, sel, rule,
                  AssembleOptions{"synthetic", require_executable});
}

TaskDescriptor sample_descriptor() {
  SynthSpec spec;
  spec.model_class = ModelClass::Revolute;
  spec.noise_sigma = 0.002;
  spec.seed = 41;
  return learn_synthetic(spec, nullptr);
}

}  // namespace

TEST_SUITE("descriptor") {

TEST_CASE("book demonstration assembles a revolute descriptor") {
  SynthSpec spec;
  spec.model_class = ModelClass::Revolute;
  spec.noise_sigma = 0.002;
  spec.sweep = M_PI / 2;
  spec.seed = 31;
  SelectionReport sel;
  const TaskDescriptor d = learn_synthetic(spec, &sel);
  CHECK(d.model_class == ModelClass::Revolute);
  CHECK(d.executable());
  const auto& params = std::get<RevoluteParams>(d.model_params);
  CHECK(params.radius > 0.0);
  CHECK(std::abs(std::abs(d.provenance.swept_value) - M_PI / 2) < 0.05);
  CHECK(d.provenance.sample_count == 100);
  CHECK(d.provenance.duration_s == doctest::Approx(99.0 / 20.0));
  CHECK(d.object_label == "book");
  CHECK(d.bbox.valid());
}

TEST_CASE("drawer demonstration assembles a prismatic descriptor") {
  SynthSpec spec;
  spec.model_class = ModelClass::Prismatic;
  spec.travel = 0.3;
  spec.noise_sigma = 0.002;
  spec.seed = 32;
  const TaskDescriptor d = learn_synthetic(spec, nullptr);
  CHECK(d.model_class == ModelClass::Prismatic);
  CHECK(std::abs(std::abs(d.provenance.swept_value) - 0.3) < 0.01);
}

TEST_CASE("swept angle survives noise and unwraps long sweeps") {
  SynthSpec spec;
  spec.model_class = ModelClass::Revolute;
  spec.noise_sigma = 0.0;
  spec.sweep = 3.5;  // beyond pi: a first/last reading would wrap
  const TaskDescriptor d = learn_synthetic(spec, nullptr);
  CHECK(std::abs(std::abs(d.provenance.swept_value) - 3.5) < 1e-6);
}

TEST_CASE("stationary demonstration is not executable") {
  SynthSpec spec;
  spec.model_class = ModelClass::Rigid;
  spec.noise_sigma = 0.002;
  spec.seed = 33;
  try {
    learn_synthetic(spec, nullptr, /*require_executable=*/true);
    FAIL("expected NonExecutableModel");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonExecutableModel);
  }
  const TaskDescriptor d = learn_synthetic(spec, nullptr, false);
  CHECK(d.model_class == ModelClass::Rigid);
  CHECK(!d.executable());
  CHECK(!d.ref_rule.has_value());
}

TEST_CASE("serialize/parse round trip is exact, field for field") {
  TaskDescriptor d = sample_descriptor();
  d.grasp.orientation = std::array<double, 4>{0.5, 0.5, -0.5, 0.5};
  const TaskDescriptor back = parse_descriptor(serialize(d));

  CHECK(back.version == d.version);
  CHECK(back.object_label == d.object_label);
  CHECK(back.grasp.px.u == d.grasp.px.u);
  CHECK(back.grasp.px.v == d.grasp.px.v);
  CHECK(back.grasp.px.d == d.grasp.px.d);
  CHECK(back.grasp.position == d.grasp.position);
  REQUIRE(back.grasp.orientation.has_value());
  CHECK(*back.grasp.orientation == *d.grasp.orientation);
  CHECK(back.bbox.u0 == d.bbox.u0);
  CHECK(back.bbox.v0 == d.bbox.v0);
  CHECK(back.bbox.u1 == d.bbox.u1);
  CHECK(back.bbox.v1 == d.bbox.v1);
  CHECK(back.model_class == d.model_class);
  const auto& pa = std::get<RevoluteParams>(back.model_params);
  const auto& pb = std::get<RevoluteParams>(d.model_params);
  CHECK(pa.center == pb.center);
  CHECK(pa.axis == pb.axis);
  CHECK(pa.radius == pb.radius);
  REQUIRE(back.ref_rule.has_value());
  CHECK(back.ref_rule->model_class == d.ref_rule->model_class);
  CHECK(back.ref_rule->edge_class == d.ref_rule->edge_class);
  CHECK(back.ref_rule->grasp_axis_dist_norm == d.ref_rule->grasp_axis_dist_norm);
  CHECK(back.provenance.recording_id == d.provenance.recording_id);
  CHECK(back.provenance.sample_count == d.provenance.sample_count);
  CHECK(back.provenance.duration_s == d.provenance.duration_s);
  CHECK(back.provenance.swept_value == d.provenance.swept_value);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& ea = back.provenance.selection.entries[i];
    const auto& eb = d.provenance.selection.entries[i];
    CHECK(ea.model_class == eb.model_class);
    CHECK(ea.fitted == eb.fitted);
    CHECK(ea.failure_reason == eb.failure_reason);
    CHECK(ea.bic == eb.bic);
    CHECK(ea.posterior == eb.posterior);
  }

  // And the text form itself is stable under a second pass.
  CHECK(serialize(back) == serialize(d));
}

TEST_CASE("missing model.class reports the field path") {
  nlohmann::ordered_json j =
      nlohmann::ordered_json::parse(serialize(sample_descriptor()));
  j["model"].erase("class");
  try {
    parse_descriptor(j.dump());
    FAIL("expected SchemaViolation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemaViolation);
    CHECK(e.stage() == "model.class");
  }
}

TEST_CASE("unknown fields are rejected with their path") {
  nlohmann::ordered_json j =
      nlohmann::ordered_json::parse(serialize(sample_descriptor()));
  j["grasp"]["flavor"] = "vanilla";
  try {
    parse_descriptor(j.dump());
    FAIL("expected SchemaViolation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemaViolation);
    CHECK(e.stage() == "grasp.flavor");
  }
}

TEST_CASE("foreign version is refused") {
  nlohmann::ordered_json j =
      nlohmann::ordered_json::parse(serialize(sample_descriptor()));
  j["version"] = 99;
  try {
    parse_descriptor(j.dump());
    FAIL("expected VersionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::VersionMismatch);
  }
}

TEST_CASE("rule class must match the model class") {
  nlohmann::ordered_json j =
      nlohmann::ordered_json::parse(serialize(sample_descriptor()));
  j["ref_rule"] = {{"class", "prismatic"}, {"direction_px", {1.0, 0.0}}};
  CHECK_THROWS_AS(parse_descriptor(j.dump()), Error);
}

TEST_CASE("malformed document") {
  CHECK_THROWS_AS(parse_descriptor("not json at all"), Error);
  CHECK_THROWS_AS(parse_descriptor("{}"), Error);
}

}  // TEST_SUITE
