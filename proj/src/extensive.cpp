#include "catlas/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace catlas {

namespace {

// Intersection point of great-circle arcs ab and cd, if any.
std::optional<V3> arc_intersection(const V3& a, const V3& b, const V3& c, const V3& d) {
  const V3 n1 = a.cross(b), n2 = c.cross(d);
  const V3 L = n1.cross(n2);
  if (L.norm() < 1e-14) return std::nullopt;
  for (double s : {1.0, -1.0}) {
    const V3 p = s * L.normalized();
    if (a.cross(p).dot(n1) >= 0 && p.cross(b).dot(n1) >= 0 && c.cross(p).dot(n2) >= 0 && p.cross(d).dot(n2) >= 0)
      return p;
  }
  return std::nullopt;
}

bool chords_may_meet(const V3& a, const V3& b, const V3& c, const V3& d) {
  return ((a + b) / 2 - (c + d) / 2).norm() <= ((a - b).norm() + (c - d).norm()) / 2 + 1e-12;
}

std::vector<Crossing> crossings(const std::vector<V3>& curve, const std::vector<V3>& target, bool target_closed,
                                const TangentField& Y) {
  std::vector<Crossing> out;
  const size_t n = curve.size();
  const size_t m = target_closed ? target.size() : target.size() - 1;
  for (size_t i = 0; i < n; ++i) {
    const V3& a = curve[i];
    const V3& b = curve[(i + 1) % n];
    for (size_t j = 0; j < m; ++j) {
      const V3 c = target[j].normalized();
      const V3 d = target[(j + 1) % target.size()].normalized();
      if (!chords_may_meet(a, b, c, d)) continue;
      auto p = arc_intersection(a, b, c, d);
      if (!p) continue;
      const V3 y = Y(*p);
      V3 t = b - a;
      t -= t.dot(*p) * *p;
      double angle = 0.0;
      if (y.norm() > 0 && t.norm() > 0) angle = std::asin(std::min(1.0, t.normalized().cross(y.normalized()).norm()));
      out.push_back({static_cast<int>(i), *p, angle});
    }
  }
  return out;
}

bool embedded(const std::vector<V3>& curve) {
  const size_t n = curve.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i)
    if ((curve[i] - curve[(i + 1) % n]).norm() < 1e-14) return false;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const V3 &a = curve[i], &b = curve[(i + 1) % n], &c = curve[j], &d = curve[(j + 1) % n];
      if (chords_may_meet(a, b, c, d) && arc_intersection(a, b, c, d)) return false;
    }
  return true;
}

// Edges of the cycle closed by a loop edge: the edge plus the spanning-forest path between its ends.
std::vector<int> loop_cycle(const SignedGraph& g, int loop_edge) {
  std::vector<int> forest;
  for (size_t e = 0; e < g.edges.size(); ++e)
    if (std::find(g.loop_edges.begin(), g.loop_edges.end(), static_cast<int>(e)) == g.loop_edges.end())
      forest.push_back(static_cast<int>(e));
  const int s = g.edges[loop_edge].from, t = g.edges[loop_edge].to;
  // Depth-first search over forest edges.
  std::vector<std::pair<int, std::vector<int>>> stack{{s, {}}};
  std::vector<int> visited{s};
  while (!stack.empty()) {
    auto [v, path] = stack.back();
    stack.pop_back();
    if (v == t) {
      path.push_back(loop_edge);
      return path;
    }
    for (int e : forest) {
      const int a = g.edges[e].from, b = g.edges[e].to;
      const int w = a == v ? b : b == v ? a : -1;
      if (w < 0 || std::find(visited.begin(), visited.end(), w) != visited.end()) continue;
      visited.push_back(w);
      auto next = path;
      next.push_back(e);
      stack.emplace_back(w, next);
    }
  }
  return {loop_edge};
}

}  // namespace

std::vector<V3> great_circle(const V3& normal, int samples) {
  const V3 n = normal.normalized();
  V3 e1 = std::abs(n.z()) < 0.9 ? V3::UnitZ().cross(n) : V3::UnitX().cross(n);
  e1.normalize();
  const V3 e2 = n.cross(e1);
  std::vector<V3> pts;
  for (int k = 0; k < samples; ++k) {
    const double t = 2 * std::numbers::pi * k / samples;
    pts.push_back(std::cos(t) * e1 + std::sin(t) * e2);
  }
  return pts;
}

ExtensiveReport extensive_report(const std::vector<V3>& curve_in, const TangentField& Y, const FoliationReport& report,
                                 double angle_tol) {
  std::vector<V3> curve;
  for (const V3& p : curve_in) curve.push_back(p.normalized());
  ExtensiveReport r;
  r.embedded = embedded(curve);
  if (!r.embedded) throw Error("not_embedded", "curve has a self-intersection");
  auto check = [&](const std::string& cond, int target, const std::vector<std::vector<V3>>& orbits, bool closed) {
    ConditionEvidence ev;
    ev.condition = cond;
    ev.target = target;
    for (const auto& o : orbits)
      for (const auto& c : crossings(curve, o, closed, Y))
        if (c.angle >= angle_tol) ev.crossings.push_back(c);
    ev.satisfied = !ev.crossings.empty();
    r.evidence.push_back(ev);
  };
  for (size_t k = 0; k < report.cycles.size(); ++k) check("E1", static_cast<int>(k), {report.cycles[k].polyline}, true);
  int loop_id = 0;
  for (const SignedGraph* g : {&report.graph.positive, &report.graph.negative})
    for (int e : g->loop_edges) {
      std::vector<std::vector<V3>> orbits;
      for (int k : loop_cycle(*g, e)) orbits.push_back(g->edges[k].polyline);
      check("E2", loop_id++, orbits, false);
    }
  for (size_t k = 0; k < report.graph.saddle_connections.size(); ++k)
    check("E3", static_cast<int>(k), {report.graph.saddle_connections[k].polyline}, false);
  r.extensive = std::all_of(r.evidence.begin(), r.evidence.end(), [](const auto& e) { return e.satisfied; });
  return r;
}

std::vector<V3> find_extensive_curve(const TangentField& Y, const FoliationReport& report) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<V3> normals{V3::UnitZ()};
  // Icosahedron vertices, face centers and edge midpoints, one per antipodal pair.
  std::vector<V3> verts{V3(-1, t, 0), V3(1, t, 0), V3(-1, -t, 0), V3(1, -t, 0), V3(0, -1, t), V3(0, 1, t),
                        V3(0, -1, -t), V3(0, 1, -t), V3(t, 0, -1), V3(t, 0, 1), V3(-t, 0, -1), V3(-t, 0, 1)};
  for (auto& v : verts) v.normalize();
  std::vector<V3> dirs = verts;
  for (size_t i = 0; i < verts.size(); ++i)
    for (size_t j = i + 1; j < verts.size(); ++j) {
      if ((verts[i] - verts[j]).norm() > 1.1) continue;
      dirs.push_back((verts[i] + verts[j]).normalized());
      for (size_t k = j + 1; k < verts.size(); ++k)
        if ((verts[i] - verts[k]).norm() < 1.1 && (verts[j] - verts[k]).norm() < 1.1)
          dirs.push_back((verts[i] + verts[j] + verts[k]).normalized());
    }
  for (const V3& d : dirs) {
    bool dup = false;
    for (const V3& n : normals) dup = dup || std::abs(n.dot(d)) > 1 - 1e-9;
    if (!dup) normals.push_back(d);
  }
  const size_t base = normals.size();
  for (size_t i = 0; i < base; ++i)
    for (double tilt : {0.05, 0.15})
      for (int a = 0; a < 2; ++a)
        normals.push_back(Eigen::AngleAxisd(tilt, a == 0 ? V3(V3::UnitX()) : V3(V3::UnitY())) * normals[i]);
  for (const V3& n : normals) {
    auto curve = great_circle(n);
    if (extensive_report(curve, Y, report).extensive) return curve;
  }
  throw Error("search_exhausted", "no great circle or tilt satisfied E1-E3");
}

}  // namespace catlas
