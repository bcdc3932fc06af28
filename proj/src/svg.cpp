#include "influence/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

namespace influence {

namespace {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

constexpr int kWidth = 900;
constexpr int kHeight = 640;
constexpr int kMargin = 50;

// Fixed oblique camera: x right, y depth, z up.
Point project(double x, double y, double z) {
  const double c = 0.45;
  return {x + c * y, -(z + c * 0.5 * y)};
}

double component(const Eigen::VectorXd& v, int d) {
  return d < v.size() ? v(d) : 0.0;
}

struct Mapper {
  double min_x = 0, max_x = 1, min_y = 0, max_y = 1;

  void include(const Point& p) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  Point to_screen(const Point& p) const {
    const double sx = (kWidth - 2.0 * kMargin) / std::max(1e-9, max_x - min_x);
    const double sy = (kHeight - 2.0 * kMargin) / std::max(1e-9, max_y - min_y);
    const double s = std::min(sx, sy);
    return {kMargin + (p.x - min_x) * s, kMargin + (p.y - min_y) * s};
  }
};

void polyline(std::ostream& out, const Mapper& map,
              const std::vector<Point>& pts, const std::string& color,
              double width, const std::string& dash = "") {
  out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
      << width << "\"";
  if (!dash.empty()) out << " stroke-dasharray=\"" << dash << "\"";
  out << " points=\"";
  for (const auto& p : pts) {
    Point s = map.to_screen(p);
    out << s.x << "," << s.y << " ";
  }
  out << "\"/>\n";
}

void header(std::ostream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n";
}

const char* kNodeColors[] = {"#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
                             "#8c564b", "#17becf"};

}  // namespace

void write_trajectory_svg(std::ostream& out, const RunResult& result,
                          int node_count) {
  std::vector<Point> target, desired;
  std::vector<std::vector<Point>> agents(node_count);
  for (const auto& row : result.rows) {
    target.push_back(project(component(row.x0, 0), component(row.x0, 1),
                             component(row.x0, 2)));
    desired.push_back(project(component(row.xd, 0), component(row.xd, 1),
                              component(row.xd, 2)));
    for (int i = 0; i < node_count; ++i) {
      agents[i].push_back(project(component(row.y[i], 0),
                                  component(row.y[i], 1),
                                  component(row.y[i], 2)));
    }
  }

  Mapper map;
  for (const auto& p : target) map.include(p);
  for (const auto& p : desired) map.include(p);
  for (const auto& a : agents) {
    for (const auto& p : a) map.include(p);
  }

  header(out, "Target, desired, and influencer trajectories");
  for (int i = 0; i < node_count; ++i) {
    polyline(out, map, agents[i], kNodeColors[i % 6], 1.0);
  }
  polyline(out, map, desired, "#888888", 1.5, "6,4");
  polyline(out, map, target, "#d62728", 2.0);
  out << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
      << "red: target, dashed: desired, colored: influencers</text>\n";
  out << "</svg>\n";
}

void write_tracking_error_svg(std::ostream& out, const RunResult& result) {
  std::vector<Point> curve;
  for (const auto& row : result.rows) {
    curve.push_back({row.t, -row.e_norm});
  }
  Mapper map;
  for (const auto& p : curve) map.include(p);
  map.include({0.0, 0.0});

  header(out, "Target tracking error norm");
  // axes
  Point origin = map.to_screen({map.min_x, 0.0});
  Point xend = map.to_screen({map.max_x, 0.0});
  out << "<line x1=\"" << origin.x << "\" y1=\"" << origin.y << "\" x2=\""
      << xend.x << "\" y2=\"" << xend.y
      << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
  polyline(out, map, curve, "#d62728", 1.5);
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">t (s) vs ||e|| (m)</text>\n";
  out << "</svg>\n";
}

}  // namespace influence
