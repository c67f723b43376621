#include "catlas/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace catlas {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::inapplicable: return "inapplicable";
  }
  return "inconclusive";
}

std::string to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::structurally_stable: return "StructurallyStable";
    case StabilityClass::q1: return "Q1";
    case StabilityClass::q2: return "Q2";
    case StabilityClass::q3: return "Q3";
    case StabilityClass::other: return "Other";
  }
  return "Other";
}

namespace {

constexpr double kSeparatrixOffset = 1e-5;
constexpr double kCenterOffset = 1e-3;

double segment_distance(const V3& p, const V3& a, const V3& b) {
  const V3 d = b - a;
  const double len2 = d.squaredNorm();
  const double t = len2 > 0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (a + t * d - p).norm();
}

// The midpoint of a lies within tol of the polyline b.
bool polylines_close(const std::vector<V3>& a, const std::vector<V3>& b, double tol) {
  if (a.empty() || b.empty()) return false;
  const V3& mid = a[a.size() / 2];
  if (b.size() == 1) return (b[0] - mid).norm() < tol;
  for (size_t i = 0; i + 1 < b.size(); ++i)
    if (segment_distance(mid, b[i], b[i + 1]) < tol) return true;
  return false;
}

void add_unique(std::vector<GraphEdge>& list, const GraphEdge& e) {
  for (const auto& f : list) {
    const bool same_ends = (f.from == e.from && f.to == e.to);
    if (same_ends && polylines_close(e.polyline, f.polyline, 5e-3)) return;
  }
  list.push_back(e);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

void finish_graph(SignedGraph& g) {
  const int n = static_cast<int>(g.vertices.size());
  auto id = [&](int v) { return static_cast<int>(std::find(g.vertices.begin(), g.vertices.end(), v) - g.vertices.begin()); };
  UnionFind uf(n);
  g.loop_edges.clear();
  for (size_t e = 0; e < g.edges.size(); ++e)
    if (!uf.unite(id(g.edges[e].from), id(g.edges[e].to))) g.loop_edges.push_back(static_cast<int>(e));
  g.components = 0;
  for (int v = 0; v < n; ++v) g.components += uf.find(v) == v;
  g.betti = static_cast<int>(g.edges.size()) - n + g.components;
}

}  // namespace

OrbitGraph build_graphs(const TangentField& Y, const std::vector<SingularPoint>& singular,
                        const FoliationParams& params) {
  OrbitGraph g;
  for (size_t i = 0; i < singular.size(); ++i) {
    const auto& p = singular[i];
    const int idx = static_cast<int>(i);
    std::vector<std::pair<V3, Direction>> starts;
    if (p.type == SingularType::saddle) {
      for (double s : {1.0, -1.0}) {
        starts.emplace_back(p.position + s * kSeparatrixOffset * p.directions[0], Direction::forward);
        starts.emplace_back(p.position + s * kSeparatrixOffset * p.directions[1], Direction::backward);
      }
    } else if (p.type == SingularType::saddle_node) {
      const Direction hyper = p.source ? Direction::forward : Direction::backward;
      for (double s : {1.0, -1.0}) starts.emplace_back(p.position + s * kSeparatrixOffset * p.directions[0], hyper);
      // Center branch on the hyperbolic-sector side: incoming for a saddle-source, outgoing for a saddle-sink.
      const double side = p.center_quadratic > 0 ? 1.0 : -1.0;
      if (p.source)
        starts.emplace_back(p.position - side * kCenterOffset * p.directions[1], Direction::backward);
      else
        starts.emplace_back(p.position + side * kCenterOffset * p.directions[1], Direction::forward);
    } else {
      continue;
    }
    for (const auto& [x0, dir] : starts) {
      Separatrix sep;
      sep.saddle = idx;
      sep.direction = dir;
      sep.orbit = trace_orbit(Y, x0, dir, singular, params, idx);
      const int other = sep.orbit.limit == LimitKind::singular_point ? sep.orbit.singular : -1;
      sep.alpha = dir == Direction::forward ? idx : other;
      sep.omega = dir == Direction::forward ? other : idx;
      if (sep.orbit.limit == LimitKind::budget_exhausted || sep.orbit.limit == LimitKind::polycycle) ++g.unresolved;
      if (sep.alpha >= 0 && sep.omega >= 0) {
        GraphEdge e{sep.alpha, sep.omega, sep.orbit.points};
        if (dir == Direction::backward) std::reverse(e.polyline.begin(), e.polyline.end());
        const int sa = singular[sep.alpha].sign, so = singular[sep.omega].sign;
        if (sa != 0 && sa == so) add_unique(sa > 0 ? g.positive.edges : g.negative.edges, e);
        if (sa < 0 && so > 0) add_unique(g.retrograde, e);
        auto saddle_like = [&](int k) {
          return singular[k].type == SingularType::saddle || singular[k].type == SingularType::saddle_node;
        };
        if (saddle_like(sep.alpha) && saddle_like(sep.omega)) add_unique(g.saddle_connections, e);
      }
      g.separatrices.push_back(std::move(sep));
    }
  }
  for (size_t i = 0; i < singular.size(); ++i) {
    if (singular[i].sign > 0) g.positive.vertices.push_back(static_cast<int>(i));
    if (singular[i].sign < 0) g.negative.vertices.push_back(static_cast<int>(i));
  }
  finish_graph(g.positive);
  finish_graph(g.negative);
  return g;
}

ConvexityReport convexity_report(const std::vector<SingularPoint>& singular, const std::vector<CycleRecord>& cycles,
                                 const OrbitGraph& graph) {
  ConvexityReport r;
  for (const auto& c : cycles) r.degenerate_cycles += c.degenerate;
  r.retrograde_connections = static_cast<int>(graph.retrograde.size());
  int indeterminate = 0;
  for (const auto& p : singular) indeterminate += p.type == SingularType::indeterminate;
  if (r.degenerate_cycles > 0 || r.retrograde_connections > 0) {
    r.convex = Verdict::no;
    r.reason = r.degenerate_cycles > 0 ? "degenerate cycle" : "retrograde connection";
  } else if (indeterminate > 0) {
    r.convex = Verdict::inconclusive;
    r.reason = "indeterminate singular point";
  } else if (graph.unresolved > 0) {
    r.convex = Verdict::inconclusive;
    r.reason = "unresolved separatrix";
  } else {
    r.convex = Verdict::yes;
  }
  return r;
}

TightnessReport tightness_report(const ConvexityReport& convexity, const std::vector<CycleRecord>& cycles,
                                 const OrbitGraph& graph) {
  TightnessReport t;
  if (convexity.convex == Verdict::no) {
    t.tight = Verdict::inapplicable;
    return t;
  }
  if (!cycles.empty()) {
    t.tight = Verdict::no;
    t.witness = "cycle";
    t.witness_polyline = cycles.front().polyline;
  } else if (!graph.negative.forest()) {
    t.tight = Verdict::no;
    t.witness = "negative_loop";
    t.witness_polyline = graph.negative.edges[graph.negative.loop_edges.front()].polyline;
  } else if (!graph.positive.forest()) {
    t.tight = Verdict::no;
    t.witness = "positive_loop";
    t.witness_polyline = graph.positive.edges[graph.positive.loop_edges.front()].polyline;
  } else if (convexity.convex == Verdict::inconclusive) {
    t.tight = Verdict::inconclusive;
  } else {
    t.tight = Verdict::yes;
  }
  t.trees = graph.positive.tree() && graph.negative.tree();
  return t;
}

StabilityReport stability_class(const std::vector<SingularPoint>& singular, const std::vector<CycleRecord>& cycles,
                                const OrbitGraph& graph, const FoliationParams& params) {
  StabilityReport r;
  int saddle_node = -1;
  for (size_t i = 0; i < singular.size(); ++i) {
    const auto& p = singular[i];
    if (p.type == SingularType::indeterminate || p.margin < params.tol_eig) ++r.degenerate_points;
    if (p.type == SingularType::saddle_node) {
      ++r.saddle_nodes;
      saddle_node = static_cast<int>(i);
    }
  }
  const CycleRecord* degenerate = nullptr;
  for (const auto& c : cycles)
    if (c.degenerate) {
      ++r.degenerate_cycles;
      degenerate = &c;
    }
  int true_saddle_connections = 0;
  for (const auto& e : graph.saddle_connections)
    true_saddle_connections +=
        singular[e.from].type == SingularType::saddle && singular[e.to].type == SingularType::saddle;
  r.saddle_connections = true_saddle_connections;

  const int indeterminate = r.degenerate_points - r.saddle_nodes;
  if (indeterminate > 0) {
    r.evidence.push_back("indeterminate singular points: " + std::to_string(indeterminate));
    r.cls = StabilityClass::other;
    return r;
  }
  if (graph.unresolved > 0) {
    r.evidence.push_back("unresolved separatrices: " + std::to_string(graph.unresolved));
    r.cls = StabilityClass::other;
    return r;
  }
  const int exceptions = r.saddle_nodes + r.degenerate_cycles + r.saddle_connections;
  if (exceptions == 0) {
    r.evidence.push_back("S1, S2, S3 hold");
    r.cls = StabilityClass::structurally_stable;
  } else if (exceptions > 1) {
    r.evidence.push_back("more than one exception");
    r.cls = StabilityClass::other;
  } else if (r.saddle_nodes == 1) {
    bool proviso = true;
    for (const auto& e : graph.saddle_connections)
      if (e.from == saddle_node || e.to == saddle_node) proviso = false;
    r.evidence.push_back(proviso ? "one saddle-node, no separatrix joins it to a saddle"
                                 : "saddle-node separatrix connects to a saddle");
    r.cls = proviso ? StabilityClass::q1 : StabilityClass::other;
  } else if (r.degenerate_cycles == 1) {
    const bool proviso = std::abs(degenerate->second_derivative) > 1e-6;
    r.evidence.push_back(proviso ? "one degenerate cycle with nonzero second derivative of the return map"
                                 : "degenerate cycle with vanishing second derivative");
    r.cls = proviso ? StabilityClass::q2 : StabilityClass::other;
  } else {
    r.evidence.push_back("one saddle-to-saddle connection");
    r.cls = StabilityClass::q3;
  }
  return r;
}

FoliationReport analyze_foliation(const TangentField& Y, const FoliationParams& params) {
  FoliationReport r;
  r.name = Y.name;
  r.singular = find_singular_points(Y, params);
  r.cycles = find_limit_cycles(Y, r.singular, params);
  r.graph = build_graphs(Y, r.singular, params);
  r.convexity = convexity_report(r.singular, r.cycles, r.graph);
  r.tightness = tightness_report(r.convexity, r.cycles, r.graph);
  r.stability = stability_class(r.singular, r.cycles, r.graph, params);
  for (const auto& p : r.singular) r.index_sum += p.classified_index();
  return r;
}

}  // namespace catlas
