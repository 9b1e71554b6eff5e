#include "abt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace abt {

namespace {

struct Box {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  void include(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

// Direction angle (mod pi) -> hue; keeps parallel edges the same color.
int hue_of(double dx, double dy) {
  double ang = std::atan2(dy, dx);
  if (ang < 0.0) ang += M_PI;
  return int(std::lround(ang / M_PI * 300.0));
}

void svg_header(std::ostringstream& os, const Box& b) {
  double w = b.xmax - b.xmin, h = b.ymax - b.ymin;
  double pad = 0.1 * std::max({w, h, 1e-9});
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(b.xmin - pad) << " "
     << fmt(-(b.ymax + pad)) << " " << fmt(w + 2 * pad) << " " << fmt(h + 2 * pad)
     << "\" width=\"640\" height=\"640\">\n";
}

void svg_edges(std::ostringstream& os, const PolyhedralOneCurrent& cur, const BranchingFunction& h,
               const Box& b) {
  double max_h = 1e-12;
  for (const auto& e : cur.edges) max_h = std::max(max_h, h(e.theta));
  double scale = 0.02 * std::max(b.xmax - b.xmin, b.ymax - b.ymin);
  if (scale <= 0.0) scale = 0.02;
  for (const auto& e : cur.edges) {
    double width = (0.15 + 0.85 * h(e.theta) / max_h) * scale;
    // y is flipped so the picture is in the usual orientation.
    os << "<line x1=\"" << fmt(e.a[0]) << "\" y1=\"" << fmt(-e.a[1]) << "\" x2=\"" << fmt(e.b[0])
       << "\" y2=\"" << fmt(-e.b[1]) << "\" stroke=\"hsl(" << hue_of(e.b[0] - e.a[0], e.b[1] - e.a[1])
       << ",70%,45%)\" stroke-width=\"" << fmt(width) << "\" stroke-linecap=\"round\"/>\n";
  }
}

}  // namespace

std::string render_current_svg(const PolyhedralOneCurrent& current, const BranchingFunction& h) {
  Box box;
  bool first = true;
  for (const auto& e : current.edges) {
    if (first) {
      box = {e.a[0], e.a[0], e.a[1], e.a[1]};
      first = false;
    }
    box.include(e.a[0], e.a[1]);
    box.include(e.b[0], e.b[1]);
  }
  std::ostringstream os;
  svg_header(os, box);
  svg_edges(os, current, h, box);
  os << "</svg>\n";
  return os.str();
}

std::string render_network_svg(const Network& net, const TransportProblem& problem) {
  Box box;
  bool first = true;
  auto touch = [&](double x, double y) {
    if (first) {
      box = {x, x, y, y};
      first = false;
    }
    box.include(x, y);
  };
  for (const auto& a : problem.sources) touch(a.point[0], a.point[1]);
  for (const auto& a : problem.targets) touch(a.point[0], a.point[1]);
  for (const auto& e : net.current.edges) {
    touch(e.a[0], e.a[1]);
    touch(e.b[0], e.b[1]);
  }

  std::ostringstream os;
  svg_header(os, box);
  svg_edges(os, net.current, problem.h, box);
  double r = 0.015 * std::max(box.xmax - box.xmin, box.ymax - box.ymin);
  if (r <= 0.0) r = 0.015;
  for (const auto& a : problem.sources) {
    os << "<circle cx=\"" << fmt(a.point[0]) << "\" cy=\"" << fmt(-a.point[1]) << "\" r=\"" << fmt(r)
       << "\" fill=\"#1f77b4\"/>\n";
  }
  for (const auto& a : problem.targets) {
    os << "<rect x=\"" << fmt(a.point[0] - r) << "\" y=\"" << fmt(-a.point[1] - r) << "\" width=\""
       << fmt(2 * r) << "\" height=\"" << fmt(2 * r) << "\" fill=\"#d62728\"/>\n";
  }
  for (const auto& s : net.steiner_positions) {
    os << "<circle cx=\"" << fmt(s[0]) << "\" cy=\"" << fmt(-s[1]) << "\" r=\"" << fmt(0.7 * r)
       << "\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"" << fmt(0.4 * r) << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace abt
