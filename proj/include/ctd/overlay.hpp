#pragma once

#include <string>
#include <vector>

#include "ctd/camera.hpp"
#include "ctd/geometry.hpp"
#include "ctd/scene.hpp"

namespace ctd {

/// Pixel-space annotation primitives for the learn/generalize plots. Both
/// sinks (plain text and SVG) carry the same items so reports can be
/// verified without a plotting dependency.
struct Overlay {
  struct Rect {
    BBox box;
    std::string label;
  };
  struct Segment {
    ImageSegment seg;
    std::string label;
  };
  struct Point {
    Vec2 p;
    std::string label;
  };
  struct Polyline {
    std::vector<Vec2> pts;
    std::string label;
  };

  double width = 640.0;
  double height = 480.0;
  std::vector<Rect> rects;
  std::vector<Segment> segments;
  std::vector<Point> points;
  std::vector<Polyline> polylines;

  void add_rect(const BBox& b, std::string label);
  void add_segment(const ImageSegment& s, std::string label);
  void add_point(const Vec2& p, std::string label);
  void add_polyline(std::vector<Vec2> pts, std::string label);
};

/// Line-oriented list: "rect u0 v0 u1 v1 label" / "segment ..." /
/// "point u v label" / "polyline n u1 v1 ... label".
std::string overlay_text(const Overlay& o);

std::string overlay_svg(const Overlay& o);

}  // namespace ctd
