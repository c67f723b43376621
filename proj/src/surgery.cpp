#include "catlas/foliation.hpp"

#include <algorithm>
#include <cmath>

namespace catlas {

namespace {

double distance_to_singular(const V3& x, const std::vector<SingularPoint>& singular) {
  double d = 2.0;
  for (const auto& p : singular) d = std::min(d, (p.position - x).norm());
  return d;
}

std::vector<SingularPoint> new_points(const std::vector<SingularPoint>& before, const std::vector<SingularPoint>& after) {
  std::vector<SingularPoint> out;
  for (const auto& q : after)
    if (distance_to_singular(q.position, before) > 1e-5) out.push_back(q);
  return out;
}

bool is_sink(const SingularPoint& p) {
  return (p.type == SingularType::node || p.type == SingularType::focus) && !p.source;
}

bool is_source(const SingularPoint& p) {
  return (p.type == SingularType::node || p.type == SingularType::focus) && p.source;
}

// Inserted pair: one node of the requested kind and one saddle of the requested sign.
bool inserted_as_expected(const std::vector<SingularPoint>& inserted, bool want_sink, int saddle_sign) {
  if (inserted.size() != 2) return false;
  int nodes = 0, saddles = 0;
  for (const auto& p : inserted) {
    if (want_sink ? is_sink(p) : is_source(p)) ++nodes;
    if (p.type == SingularType::saddle && p.sign == saddle_sign) ++saddles;
  }
  return nodes == 1 && saddles == 1;
}

}  // namespace

SurgeryResult break_limit_cycle(const TangentField& Y, const FoliationReport& report, int cycle,
                                const FoliationParams& params) {
  if (cycle < 0 || cycle >= static_cast<int>(report.cycles.size())) throw Error("precondition", "no such cycle");
  const CycleRecord& c = report.cycles[cycle];
  if (c.degenerate) throw Error("degenerate_cycle", "cannot break a degenerate cycle with a hyperbolic patch");
  const bool attracting = c.lambda < 1.0;
  double radius = std::min(0.2, 0.25 * distance_to_singular(c.point, report.singular));
  for (size_t k = 0; k < report.cycles.size(); ++k) {
    if (static_cast<int>(k) == cycle) continue;
    for (const V3& p : report.cycles[k].polyline) radius = std::min(radius, 0.25 * (p - c.point).norm());
  }
  SurgeryResult res;
  res.singular_before = static_cast<int>(report.singular.size());
  res.cycles_before = static_cast<int>(report.cycles.size());
  for (int attempt = 0; attempt < 4; ++attempt, radius /= 2) {
    ++res.attempts;
    PatchSpec patch{c.point, radius, 1.0, attracting ? -3.0 : 3.0};
    TangentField Yp = apply_patch(Y, patch);
    auto singular = find_singular_points(Yp, params);
    auto inserted = new_points(report.singular, singular);
    if (singular.size() != report.singular.size() + 2) continue;
    // Attracting: a sink and a negative saddle. Repelling: a source and a positive saddle.
    if (!inserted_as_expected(inserted, attracting, attracting ? -1 : 1)) continue;
    auto cycles = find_limit_cycles(Yp, singular, params);
    bool meets_patch = false;
    for (const auto& cy : cycles)
      for (const V3& p : cy.polyline) meets_patch = meets_patch || (p - c.point).norm() < radius;
    if (meets_patch || cycles.size() >= report.cycles.size()) continue;
    res.field = Yp;
    res.field.name = Y.name + "+break";
    res.patch = patch;
    res.singular_after = static_cast<int>(singular.size());
    res.cycles_after = static_cast<int>(cycles.size());
    res.inserted = inserted;
    return res;
  }
  throw Error("patch_failed", "no patch radius satisfied the surgery postconditions");
}

SurgeryResult eliminate_graph_loop(const TangentField& Y, const FoliationReport& report, bool negative,
                                   const FoliationParams& params) {
  const SignedGraph& g = negative ? report.graph.negative : report.graph.positive;
  if (g.loop_edges.empty()) throw Error("loop_absent", negative ? "negative graph is a forest" : "positive graph is a forest");
  const GraphEdge& edge = g.edges[g.loop_edges.front()];
  // Regular point of the loop edge farthest from the singular points.
  V3 x = edge.polyline[edge.polyline.size() / 2];
  double best = -1.0;
  for (const V3& p : edge.polyline) {
    const double d = distance_to_singular(p, report.singular);
    if (d > best) {
      best = d;
      x = p;
    }
  }
  double radius = std::min(0.2, 0.25 * best);
  SurgeryResult res;
  res.singular_before = static_cast<int>(report.singular.size());
  res.cycles_before = static_cast<int>(report.cycles.size());
  res.positive_betti_before = report.graph.positive.betti;
  res.negative_betti_before = report.graph.negative.betti;
  for (int attempt = 0; attempt < 4; ++attempt, radius /= 2) {
    ++res.attempts;
    // Negative loop: a sink q upstream and a positive saddle r downstream. Positive loop: the mirror.
    PatchSpec patch{x, radius, 1.0, negative ? -1.0 : 1.0};
    TangentField Yp = apply_patch(Y, patch);
    auto singular = find_singular_points(Yp, params);
    auto inserted = new_points(report.singular, singular);
    if (singular.size() != report.singular.size() + 2) continue;
    if (!inserted_as_expected(inserted, negative, negative ? 1 : -1)) continue;
    OrbitGraph graph = build_graphs(Yp, singular, params);
    const int pb = graph.positive.betti, nb = graph.negative.betti;
    const bool ok = negative ? (nb == res.negative_betti_before - 1 && pb == res.positive_betti_before)
                             : (pb == res.positive_betti_before - 1 && nb == res.negative_betti_before);
    if (!ok || graph.unresolved > 0) continue;
    res.field = Yp;
    res.field.name = Y.name + "+unloop";
    res.patch = patch;
    res.singular_after = static_cast<int>(singular.size());
    res.cycles_after = res.cycles_before;
    res.positive_betti_after = pb;
    res.negative_betti_after = nb;
    res.inserted = inserted;
    return res;
  }
  throw Error("patch_failed", "no patch radius satisfied the surgery postconditions");
}

}  // namespace catlas
