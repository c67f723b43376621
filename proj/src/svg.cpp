#include "catlas/svg.hpp"

#include <cstdio>
#include <sstream>

namespace catlas {

namespace {

const char* kBrickFill[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a6761d"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string header(int width, int height) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<style>\n"
      << "  .brick { stroke: #222; stroke-width: 0.6; fill-opacity: 0.55; }\n"
      << "  .n2 { fill: none; stroke: #000; stroke-width: 1; stroke-dasharray: 4 3; }\n"
      << "  .disc { fill: #fafafa; stroke: #444; stroke-width: 1.2; }\n"
      << "  .orbit { fill: none; stroke: #999; stroke-width: 0.8; }\n"
      << "  .cycle { fill: none; stroke: #d95f02; stroke-width: 2; }\n"
      << "  .gamma-plus { fill: none; stroke: #1b9e77; stroke-width: 2.2; }\n"
      << "  .gamma-minus { fill: none; stroke: #7570b3; stroke-width: 2.2; }\n"
      << "  .retrograde { fill: none; stroke: #e7298a; stroke-width: 2.2; }\n"
      << "  .dividing { fill: none; stroke: #000; stroke-width: 1.4; stroke-dasharray: 6 4; }\n"
      << "  .positive { fill: #1b9e77; } .negative { fill: #7570b3; } .degenerate { fill: #e6ab02; }\n"
      << "</style>\n";
  return out.str();
}

class Hemispheres {
 public:
  explicit Hemispheres(std::ostringstream& out) : out_(out) {}

  // Polyline split into runs per hemisphere; the lower panel is mirrored so it is seen from below.
  void polyline(const std::vector<V3>& pts, const std::string& cls) {
    std::string path;
    int current = -1;
    for (const auto& p : pts) {
      const int side = p.z() >= 0 ? 0 : 1;
      const auto [x, y] = project(p, side);
      if (side != current) {
        flush(path, cls);
        path = "M" + num(x) + ' ' + num(y);
        current = side;
      } else {
        path += " L" + num(x) + ' ' + num(y);
      }
    }
    flush(path, cls);
  }

  void point(const V3& p, const std::string& cls, double r) {
    const int side = p.z() >= 0 ? 0 : 1;
    const auto [x, y] = project(p, side);
    out_ << "<circle class=\"" << cls << "\" cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r)
         << "\"/>\n";
  }

  static std::pair<double, double> project(const V3& p, int side) {
    const double R = kSvgPanel / 2.0 - kSvgMargin;
    const double cx = kSvgPanel / 2.0 + side * kSvgPanel;
    const double cy = kSvgPanel / 2.0;
    const double x = side == 0 ? p.x() : -p.x();
    return {cx + R * x, cy - R * p.y()};
  }

 private:
  void flush(const std::string& path, const std::string& cls) {
    if (path.find(' ', path.find(' ') + 1) == std::string::npos) return;  // single point
    out_ << "<path class=\"" << cls << "\" d=\"" << path << "\"/>\n";
  }

  std::ostringstream& out_;
};

}  // namespace

std::string brick_svg(const Rational& s, const Box& window, int outlined_color) {
  if (window.dim() != 2) throw Error("precondition", "brick diagrams are drawn for d = 2");
  const double x0 = to_double(window.lo[0]), y0 = to_double(window.lo[1]);
  const double w = to_double(window.hi[0]) - x0, h = to_double(window.hi[1]) - y0;
  const double scale = (kSvgPanel - 2.0 * kSvgMargin) / std::max(w, h);
  auto X = [&](double x) { return kSvgMargin + (x - x0) * scale; };
  auto Y = [&](double y) { return kSvgPanel - kSvgMargin - (y - y0) * scale; };
  std::ostringstream out;
  out << header(kSvgPanel, kSvgPanel);
  std::ostringstream outlines;
  enumerate_cubes(2, s, window, [&](const CubeId& c) {
    const Box b = c.box();
    const int color = color_of(c);
    const double bx = to_double(b.lo[0]), by = to_double(b.lo[1]);
    const double bw = to_double(b.side(0)), bh = to_double(b.side(1));
    out << "<rect class=\"brick\" fill=\"" << kBrickFill[(color - 1) % 6] << "\" x=\"" << num(X(bx)) << "\" y=\""
        << num(Y(by + bh)) << "\" width=\"" << num(bw * scale) << "\" height=\"" << num(bh * scale) << "\"/>\n";
    if (color == outlined_color) {
      const Box n2 = neighborhoods(c).N2;
      const double nx = to_double(n2.lo[0]), ny = to_double(n2.lo[1]);
      outlines << "<rect class=\"n2\" x=\"" << num(X(nx)) << "\" y=\"" << num(Y(ny + to_double(n2.side(1))))
               << "\" width=\"" << num(to_double(n2.side(0)) * scale) << "\" height=\""
               << num(to_double(n2.side(1)) * scale) << "\"/>\n";
    }
  });
  out << outlines.str() << "</svg>\n";
  return out.str();
}

std::string cover_plan_svg(const CoverPlan& plan) {
  if (plan.d != 2) throw Error("precondition", "cover diagrams are drawn for d = 2");
  const double scale = kSvgPanel - 2.0 * kSvgMargin;
  auto X = [&](double x) { return kSvgMargin + x * scale; };
  auto Y = [&](double y) { return kSvgPanel - kSvgMargin - y * scale; };
  std::ostringstream out;
  out << header(kSvgPanel, kSvgPanel);
  out << "<rect class=\"disc\" x=\"" << kSvgMargin << "\" y=\"" << kSvgMargin << "\" width=\"" << num(scale)
      << "\" height=\"" << num(scale) << "\"/>\n";
  for (size_t f = 0; f < plan.families.size(); ++f) {
    out << "<g id=\"family-" << f + 1 << "\" fill=\"" << kBrickFill[f % 6] << "\">\n";
    for (const auto& region : plan.families[f])
      for (const auto& b : region.boxes) {
        const double bx = to_double(b.lo[0]), by = to_double(b.lo[1]);
        const double bw = to_double(b.side(0)), bh = to_double(b.side(1));
        if (bw * scale < 0.05 || bh * scale < 0.05) continue;  // below pixel resolution
        out << "<rect class=\"brick\" x=\"" << num(X(bx)) << "\" y=\"" << num(Y(by + bh)) << "\" width=\""
            << num(bw * scale) << "\" height=\"" << num(bh * scale) << "\"/>\n";
      }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string phase_portrait_svg(const FoliationReport& report, const SphereSurface& surface) {
  std::ostringstream out;
  out << header(2 * kSvgPanel, kSvgPanel);
  const double R = kSvgPanel / 2.0 - kSvgMargin;
  for (int side = 0; side < 2; ++side)
    out << "<circle class=\"disc\" cx=\"" << num(kSvgPanel / 2.0 + side * kSvgPanel) << "\" cy=\""
        << num(kSvgPanel / 2.0) << "\" r=\"" << num(R) << "\"/>\n";
  Hemispheres H(out);
  for (const auto& s : report.graph.separatrices) H.polyline(s.orbit.points, "orbit");
  for (const auto& c : report.cycles) H.polyline(c.polyline, "cycle");
  for (const auto& e : report.graph.positive.edges) H.polyline(e.polyline, "gamma-plus");
  for (const auto& e : report.graph.negative.edges) H.polyline(e.polyline, "gamma-minus");
  for (const auto& e : report.graph.retrograde) H.polyline(e.polyline, "retrograde");
  if (report.dividing)
    for (const auto& curve : report.dividing->curves) {
      std::vector<V3> unit;
      for (const auto& p : curve) unit.push_back(surface.to_unit(p));
      if (!unit.empty()) unit.push_back(unit.front());
      H.polyline(unit, "dividing");
    }
  for (const auto& s : report.singular) {
    const std::string cls = s.sign > 0 ? "positive" : s.sign < 0 ? "negative" : "degenerate";
    H.point(s.position, cls, s.type == SingularType::saddle ? 4.0 : 6.0);
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace catlas
