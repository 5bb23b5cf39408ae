#include "ctd/overlay.hpp"

#include <cstdio>

namespace ctd {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

const char* stroke_for(const std::string& label) {
  if (label == "bbox") return "#2ca02c";
  if (label == "axis") return "#1f77b4";
  if (label == "waypoints") return "#9467bd";
  return "#7f7f7f";
}

const char* fill_for(const std::string& label) {
  if (label == "center") return "#d62728";
  if (label == "grasp") return "#ff7f0e";
  return "#7f7f7f";
}

}  // namespace

void Overlay::add_rect(const BBox& b, std::string label) {
  rects.push_back({b, std::move(label)});
}

void Overlay::add_segment(const ImageSegment& s, std::string label) {
  segments.push_back({s, std::move(label)});
}

void Overlay::add_point(const Vec2& p, std::string label) {
  points.push_back({p, std::move(label)});
}

void Overlay::add_polyline(std::vector<Vec2> pts, std::string label) {
  polylines.push_back({std::move(pts), std::move(label)});
}

std::string overlay_text(const Overlay& o) {
  std::string out = "# overlay v1\n";
  for (const auto& r : o.rects) {
    out += "rect " + fmt(r.box.u0) + " " + fmt(r.box.v0) + " " + fmt(r.box.u1) +
           " " + fmt(r.box.v1) + " " + r.label + "\n";
  }
  for (const auto& s : o.segments) {
    out += "segment " + fmt(s.seg.a.x()) + " " + fmt(s.seg.a.y()) + " " +
           fmt(s.seg.b.x()) + " " + fmt(s.seg.b.y()) + " " + s.label + "\n";
  }
  for (const auto& p : o.points) {
    out += "point " + fmt(p.p.x()) + " " + fmt(p.p.y()) + " " + p.label + "\n";
  }
  for (const auto& pl : o.polylines) {
    out += "polyline " + std::to_string(pl.pts.size());
    for (const Vec2& p : pl.pts) {
      out += " " + fmt(p.x()) + " " + fmt(p.y());
    }
    out += " " + pl.label + "\n";
  }
  return out;
}

std::string overlay_svg(const Overlay& o) {
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(o.width) +
         "\" height=\"" + fmt(o.height) + "\" viewBox=\"0 0 " + fmt(o.width) +
         " " + fmt(o.height) + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + fmt(o.width) + "\" height=\"" +
         fmt(o.height) + "\" fill=\"#ffffff\"/>\n";
  for (const auto& r : o.rects) {
    svg += "  <rect x=\"" + fmt(r.box.u0) + "\" y=\"" + fmt(r.box.v0) +
           "\" width=\"" + fmt(r.box.width()) + "\" height=\"" +
           fmt(r.box.height()) + "\" fill=\"none\" stroke=\"" +
           stroke_for(r.label) + "\" stroke-width=\"2\"><title>" + r.label +
           "</title></rect>\n";
  }
  for (const auto& s : o.segments) {
    svg += "  <line x1=\"" + fmt(s.seg.a.x()) + "\" y1=\"" + fmt(s.seg.a.y()) +
           "\" x2=\"" + fmt(s.seg.b.x()) + "\" y2=\"" + fmt(s.seg.b.y()) +
           "\" stroke=\"" + stroke_for(s.label) +
           "\" stroke-width=\"3\"><title>" + s.label + "</title></line>\n";
  }
  for (const auto& pl : o.polylines) {
    svg += "  <polyline points=\"";
    for (std::size_t i = 0; i < pl.pts.size(); ++i) {
      if (i > 0) {
        svg += " ";
      }
      svg += fmt(pl.pts[i].x()) + "," + fmt(pl.pts[i].y());
    }
    svg += "\" fill=\"none\" stroke=\"" + std::string(stroke_for(pl.label)) +
           "\" stroke-width=\"1.5\" stroke-dasharray=\"4,3\"><title>" +
           pl.label + "</title></polyline>\n";
  }
  for (const auto& p : o.points) {
    svg += "  <circle cx=\"" + fmt(p.p.x()) + "\" cy=\"" + fmt(p.p.y()) +
           "\" r=\"4\" fill=\"" + fill_for(p.label) + "\"><title>" + p.label +
           "</title></circle>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace ctd
