#include "catlas/foliation.hpp"

#include <cmath>
#include <map>
#include <numeric>

namespace catlas {

namespace {

struct Mesh {
  std::vector<V3> vertices;
  std::vector<std::array<int, 3>> faces;
};

Mesh icosphere(int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Mesh m;
  for (const V3& v : {V3(-1, t, 0), V3(1, t, 0), V3(-1, -t, 0), V3(1, -t, 0), V3(0, -1, t), V3(0, 1, t),
                      V3(0, -1, -t), V3(0, 1, -t), V3(t, 0, -1), V3(t, 0, 1), V3(-t, 0, -1), V3(-t, 0, 1)})
    m.vertices.push_back(v.normalized());
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      const int id = static_cast<int>(m.vertices.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    m.faces = std::move(next);
  }
  return m;
}

struct Attempt {
  bool degenerate = false;
  DividingSet result;
};

Attempt march(const SphereSurface& S, const OneForm& alpha, const VectorField& X, const Mesh& mesh,
              const Eigen::Matrix3d& R) {
  Attempt out;
  const size_t nv = mesh.vertices.size();
  std::vector<V3> unit(nv);
  std::vector<double> h(nv);
  double transversality = 1.0;
  auto value = [&](const V3& u) {
    const V3 p = S.to_world(u);
    Vec x = X(Vec(p));
    return alpha.coeffs(Vec(p)).dot(x);
  };
  for (size_t i = 0; i < nv; ++i) {
    unit[i] = R * mesh.vertices[i];
    const V3 p = S.to_world(unit[i]);
    Vec x = X(Vec(p));
    Vec a = alpha.coeffs(Vec(p));
    const double xn = x.norm();
    const double margin = xn > 0 ? std::abs(V3(x[0], x[1], x[2]).dot(unit[i])) / xn : 0.0;
    transversality = std::min(transversality, margin);
    h[i] = a.dot(x);
    if (std::abs(h[i]) <= 1e-14 * (a.norm() * xn + 1e-300)) out.degenerate = true;
  }
  if (!(transversality > 1e-8))
    throw Error("not_transverse", "vector field is not transverse to the sphere (margin " + std::to_string(transversality) + ")");
  out.result.transversality = transversality;
  out.result.mesh_vertices = static_cast<int>(nv);
  if (out.degenerate) return out;

  // Crossing points on mesh edges, refined by bisection along the chord.
  std::map<std::pair<int, int>, int> crossing_id;
  std::vector<V3> crossings;
  auto crossing = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = crossing_id.find(key);
    if (it != crossing_id.end()) return it->second;
    double lo = 0.0, hi = 1.0;
    const double ha = h[key.first];
    for (int k = 0; k < 40; ++k) {
      const double m = 0.5 * (lo + hi);
      const double hm = value((unit[key.first] + m * (unit[key.second] - unit[key.first])).normalized());
      if ((hm > 0) == (ha > 0)) lo = m; else hi = m;
    }
    const V3 u = (unit[key.first] + 0.5 * (lo + hi) * (unit[key.second] - unit[key.first])).normalized();
    crossings.push_back(u);
    const int id = static_cast<int>(crossings.size()) - 1;
    crossing_id.emplace(key, id);
    return id;
  };
  std::vector<std::vector<int>> adj;
  for (const auto& f : mesh.faces) {
    std::vector<int> ids;
    for (int k = 0; k < 3; ++k) {
      const int a = f[k], b = f[(k + 1) % 3];
      if ((h[a] > 0) != (h[b] > 0)) ids.push_back(crossing(a, b));
    }
    if (ids.size() != 2) continue;
    adj.resize(crossings.size());
    adj[ids[0]].push_back(ids[1]);
    adj[ids[1]].push_back(ids[0]);
  }
  adj.resize(crossings.size());

  // Each crossing has degree 2; walk the closed curves.
  std::vector<char> seen(crossings.size(), 0);
  for (size_t s = 0; s < crossings.size(); ++s) {
    if (seen[s]) continue;
    std::vector<V3> curve;
    int prev = -1, cur = static_cast<int>(s);
    while (cur >= 0 && !seen[cur]) {
      seen[cur] = 1;
      curve.push_back(S.to_world(crossings[cur]));
      int next = -1;
      for (int n : adj[cur])
        if (n != prev && !seen[n]) {
          next = n;
          break;
        }
      prev = cur;
      cur = next;
    }
    out.result.curves.push_back(std::move(curve));
  }
  out.result.components = static_cast<int>(out.result.curves.size());
  return out;
}

}  // namespace

DividingSet dividing_set(const SphereSurface& S, const OneForm& alpha, const VectorField& X, int subdivisions) {
  if (alpha.dim != 3 || X.dim != 3) throw Error("schema", "dividing set needs a form and a field on R^3");
  const Mesh mesh = icosphere(subdivisions);
  // A fixed generic rotation keeps mesh vertices off symmetric zero sets; a second one is the retry.
  for (double angle : {0.3141592653589793 / 2.7, 1.234567}) {
    const Eigen::Matrix3d R = Eigen::AngleAxisd(angle, V3(1, 2, 3).normalized()).toRotationMatrix();
    Attempt a = march(S, alpha, X, mesh, R);
    if (!a.degenerate) return a.result;
  }
  throw Error("degenerate_mesh", "zero set passes through mesh vertices");
}

}  // namespace catlas
