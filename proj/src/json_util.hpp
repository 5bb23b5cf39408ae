#pragma once

#include <array>
#include <initializer_list>
#include <string>

#include "ctd/error.hpp"
#include "ctd/geometry.hpp"
#include "json.hpp"

namespace ctd {

// Strict JSON access: every reader takes the document path of the value so
// schema errors can point at the offending field.

using Json = nlohmann::ordered_json;

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline Json parse_json_text(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw Error::schema("document", "not valid JSON");
  }
  return doc;
}

inline const Json& require_field(const Json& obj, const std::string& path,
                                 const std::string& key) {
  if (!obj.is_object()) {
    throw Error::schema(path.empty() ? "document" : path, "expected an object");
  }
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error::schema(join_path(path, key), "missing required field");
  }
  return *it;
}

inline void check_keys(const Json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw Error::schema(path.empty() ? "document" : path, "expected an object");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      known = known || item.key() == key;
    }
    if (!known) {
      throw Error::schema(join_path(path, item.key()), "unknown field");
    }
  }
}

inline double as_double(const Json& v, const std::string& path) {
  if (!v.is_number()) {
    throw Error::schema(path, "expected a number");
  }
  return v.get<double>();
}

inline long long as_integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) {
    throw Error::schema(path, "expected an integer");
  }
  return v.get<long long>();
}

inline std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) {
    throw Error::schema(path, "expected a string");
  }
  return v.get<std::string>();
}

inline bool as_bool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) {
    throw Error::schema(path, "expected a boolean");
  }
  return v.get<bool>();
}

inline Vec3 as_vec3(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) {
    throw Error::schema(path, "expected an array of 3 numbers");
  }
  return Vec3(as_double(v[0], path + "[0]"), as_double(v[1], path + "[1]"),
              as_double(v[2], path + "[2]"));
}

inline Vec2 as_vec2(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) {
    throw Error::schema(path, "expected an array of 2 numbers");
  }
  return Vec2(as_double(v[0], path + "[0]"), as_double(v[1], path + "[1]"));
}

inline std::array<double, 4> as_quat(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) {
    throw Error::schema(path, "expected an array of 4 numbers (w x y z)");
  }
  return {as_double(v[0], path + "[0]"), as_double(v[1], path + "[1]"),
          as_double(v[2], path + "[2]"), as_double(v[3], path + "[3]")};
}

inline Json vec3_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }
inline Json vec2_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

}  // namespace ctd

#include "ctd/scene.hpp"

namespace ctd {

inline Json bbox_json(const BBox& b) {
  Json j;
  j["u0"] = b.u0;
  j["v0"] = b.v0;
  j["u1"] = b.u1;
  j["v1"] = b.v1;
  return j;
}

inline BBox bbox_from_json(const Json& j, const std::string& path) {
  check_keys(j, path, {"u0", "v0", "u1", "v1"});
  BBox b{as_double(require_field(j, path, "u0"), join_path(path, "u0")),
         as_double(require_field(j, path, "v0"), join_path(path, "v0")),
         as_double(require_field(j, path, "u1"), join_path(path, "u1")),
         as_double(require_field(j, path, "v1"), join_path(path, "v1"))};
  if (!b.valid()) {
    throw Error::schema(path, "bounding box must satisfy u0 < u1 and v0 < v1");
  }
  return b;
}

inline Json pixel_json(const PixelDepth& p) {
  Json j;
  j["u"] = p.u;
  j["v"] = p.v;
  j["d"] = p.d;
  return j;
}

inline PixelDepth pixel_from_json(const Json& j, const std::string& path) {
  check_keys(j, path, {"u", "v", "d"});
  return PixelDepth{as_double(require_field(j, path, "u"), join_path(path, "u")),
                    as_double(require_field(j, path, "v"), join_path(path, "v")),
                    as_double(require_field(j, path, "d"), join_path(path, "d"))};
}

inline Json intrinsics_json(const Intrinsics& k) {
  Json j;
  j["fx"] = k.fx;
  j["fy"] = k.fy;
  j["cx"] = k.cx;
  j["cy"] = k.cy;
  j["width"] = k.width;
  j["height"] = k.height;
  return j;
}

inline Intrinsics intrinsics_from_json(const Json& j, const std::string& path) {
  check_keys(j, path, {"fx", "fy", "cx", "cy", "width", "height"});
  Intrinsics k{
      as_double(require_field(j, path, "fx"), join_path(path, "fx")),
      as_double(require_field(j, path, "fy"), join_path(path, "fy")),
      as_double(require_field(j, path, "cx"), join_path(path, "cx")),
      as_double(require_field(j, path, "cy"), join_path(path, "cy")),
      as_double(require_field(j, path, "width"), join_path(path, "width")),
      as_double(require_field(j, path, "height"), join_path(path, "height"))};
  if (!k.valid()) {
    throw Error::schema(path, "intrinsics are out of range");
  }
  return k;
}

}  // namespace ctd
