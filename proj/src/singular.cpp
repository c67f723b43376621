#include "catlas/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace catlas {

std::string to_string(SingularType t) {
  switch (t) {
    case SingularType::node: return "node";
    case SingularType::focus: return "focus";
    case SingularType::saddle: return "saddle";
    case SingularType::saddle_node: return "saddle_node";
    case SingularType::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

int SingularPoint::classified_index() const {
  switch (type) {
    case SingularType::node:
    case SingularType::focus: return 1;
    case SingularType::saddle: return -1;
    case SingularType::saddle_node: return 0;
    case SingularType::indeterminate: return index;
  }
  return index;
}

std::string SingularPoint::type_label() const {
  switch (type) {
    case SingularType::node: return source ? "node(source)" : "node(sink)";
    case SingularType::focus: return source ? "node(focus-source)" : "node(focus-sink)";
    case SingularType::saddle: return "saddle";
    case SingularType::saddle_node: return source ? "saddle-node(source)" : "saddle-node(sink)";
    case SingularType::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

namespace {

V3 ambient_direction(Chart c, const V2& w, const V2& v) {
  return V3(SphereSurface::chart_tangents(c, w) * v).normalized();
}

// Real eigenvector of a 2x2 matrix for eigenvalue lambda.
V2 eigenvector(const M2& J, double lambda) {
  M2 A = J - lambda * M2::Identity();
  V2 v = A.row(0).norm() > A.row(1).norm() ? V2(-A(0, 1), A(0, 0)) : V2(-A(1, 1), A(1, 0));
  if (v.norm() < 1e-300) v = V2(1, 0);
  return v.normalized();
}

std::vector<V3> fibonacci_points(int n) {
  std::vector<V3> pts;
  pts.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

struct NewtonResult {
  bool converged = false;
  V3 u;
  double residual = 0.0;
};

// Levenberg-Marquardt on the chart field, switching charts when |w| leaves the unit-ish disc.
NewtonResult refine_zero(const TangentField& Y, const V3& start, std::optional<Chart> force) {
  Chart c = force ? *force : SphereSurface::chart_for(start);
  V2 w = SphereSurface::chart_coords(c, start);
  V2 F = Y.chart_value(c, w);
  double mu = 1e-6;
  for (int it = 0; it < 300; ++it) {
    if (!force && w.squaredNorm() > 1.5) {
      w = SphereSurface::transition(c, w);
      c = c == Chart::north ? Chart::south : Chart::north;
      F = Y.chart_value(c, w);
    }
    if (F.norm() == 0.0) break;
    const M2 J = Y.chart_jacobian(c, w, 1e-6);
    const M2 A = J.transpose() * J + mu * M2::Identity();
    const V2 step = A.ldlt().solve(-J.transpose() * F);
    const V2 w2 = w + step;
    const V2 F2 = Y.chart_value(c, w2);
    if (F2.norm() < F.norm()) {
      w = w2;
      F = F2;
      mu = std::max(mu / 4.0, 1e-15);
      if (step.norm() < 1e-15 * (1.0 + w.norm())) break;
    } else {
      mu *= 8.0;
      if (mu > 1e12) break;
    }
    if (w.norm() > 1e3) break;
  }
  NewtonResult r;
  r.u = SphereSurface::chart_point(c, w);
  r.residual = F.norm();
  r.converged = std::isfinite(r.residual) && r.residual < 1e-10;
  return r;
}

}  // namespace

int winding_index(const TangentField& Y, const V3& u, double radius) {
  const Chart c = SphereSurface::chart_for(u);
  const V2 w = SphereSurface::chart_coords(c, u);
  const int n = 256;
  double total = 0.0;
  V2 prev = Y.chart_value(c, w + V2(radius, 0));
  for (int k = 1; k <= n; ++k) {
    const double t = 2 * std::numbers::pi * k / n;
    const V2 cur = Y.chart_value(c, w + radius * V2(std::cos(t), std::sin(t)));
    total += std::atan2(prev.x() * cur.y() - prev.y() * cur.x(), prev.dot(cur));
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

SingularPoint classify_singular(const TangentField& Y, const V3& u_in, const FoliationParams& params) {
  const V3 u = u_in.normalized();
  SingularPoint p;
  p.position = u;
  p.world = Y.surface.to_world(u);
  p.chart = SphereSurface::chart_for(u);
  p.coords = SphereSurface::chart_coords(p.chart, u);
  const V2 F = Y.chart_value(p.chart, p.coords);
  if (!(F.norm() < 1e-8)) throw Error("precondition", "field does not vanish at the point");
  const M2 J = Y.chart_jacobian(p.chart, p.coords, 1e-5);
  const double tr = J.trace();
  const double det = J.determinant();
  const double disc = tr * tr / 4.0 - det;
  std::array<double, 2> re{}, im{};
  if (disc >= 0) {
    const double r = std::sqrt(disc);
    re = {tr / 2 + r, tr / 2 - r};
  } else {
    re = {tr / 2, tr / 2};
    im = {std::sqrt(-disc), -std::sqrt(-disc)};
  }
  p.eigenvalues = {std::complex<double>(re[0], im[0]), std::complex<double>(re[1], im[1])};
  p.divergence = tr;
  p.sign = std::abs(tr) < params.tol_eig ? 0 : (tr > 0 ? 1 : -1);
  p.margin = std::min(std::abs(re[0]), std::abs(re[1]));
  p.index = winding_index(Y, u);

  const bool small0 = std::abs(re[0]) < params.tol_eig;
  const bool small1 = std::abs(re[1]) < params.tol_eig;
  if (small0 && small1) {
    p.type = SingularType::indeterminate;
    p.sign = 0;
    p.error = "IndeterminateAtTolerance";
  } else if (small0 || small1) {
    const double lh = small0 ? re[1] : re[0];
    const double lc = small0 ? re[0] : re[1];
    const V2 vh = eigenvector(J, lh);
    const V2 vc = eigenvector(J, lc);
    // Left eigenvector for the center direction: annihilates vh.
    V2 lcv(-vh.y(), vh.x());
    lcv /= lcv.dot(vc);
    const double h = 1e-3;
    auto g = [&](double s) { return lcv.dot(Y.chart_value(p.chart, p.coords + s * vc)); };
    const double a = (g(h) + g(-h) - 2 * g(0)) / (2 * h * h);
    p.directions = {ambient_direction(p.chart, p.coords, vh), ambient_direction(p.chart, p.coords, vc)};
    p.center_quadratic = a;
    p.source = lh > 0;
    p.sign = lh > 0 ? 1 : -1;
    if (std::abs(a) < 1e-6) {
      p.type = SingularType::indeterminate;
      p.sign = 0;
      p.error = "IndeterminateAtTolerance";
    } else {
      p.type = SingularType::saddle_node;
    }
  } else if (disc < 0) {
    p.type = SingularType::focus;
    p.source = re[0] > 0;
  } else if (re[0] * re[1] > 0) {
    p.type = SingularType::node;
    p.source = re[0] > 0;
  } else {
    p.type = SingularType::saddle;
    p.directions = {ambient_direction(p.chart, p.coords, eigenvector(J, re[0])),
                    ambient_direction(p.chart, p.coords, eigenvector(J, re[1]))};
  }
  if (Y.provenance == Provenance::characteristic && std::abs(tr) < params.tol_eig)
    p.error = "NotACharacteristicFoliation";
  return p;
}

std::vector<SingularPoint> find_singular_points(const TangentField& Y, const FoliationParams& params,
                                                std::optional<Chart> force_chart) {
  std::vector<V3> found;
  std::vector<double> residual;
  for (const V3& seed : fibonacci_points(params.seeds)) {
    V3 start = seed;
    if (force_chart) {
      // Keep seeds inside the forced chart's closed hemisphere plus the band.
      const double z = *force_chart == Chart::north ? seed.z() : -seed.z();
      if (z < -0.9) continue;
    }
    NewtonResult r = refine_zero(Y, start, force_chart);
    if (!r.converged) continue;
    bool dup = false;
    for (size_t i = 0; i < found.size(); ++i)
      if ((found[i] - r.u).norm() < params.dedup_radius) {
        dup = true;
        if (r.residual < residual[i]) {
          found[i] = r.u;
          residual[i] = r.residual;
        }
        break;
      }
    if (!dup) {
      found.push_back(r.u);
      residual.push_back(r.residual);
      if (static_cast<int>(found.size()) > params.max_singular_points)
        throw Error("non_isolated_zeros", "more zeros than max_singular_points; zero set is probably not isolated");
    }
  }
  std::vector<SingularPoint> out;
  for (const V3& u : found) {
    SingularPoint p = classify_singular(Y, u, params);
    // A zero that persists along some direction at distance 1e-3 is not isolated.
    for (int k = 0; k < 16; ++k) {
      const double t = std::numbers::pi * k / 16;
      const V2 q = p.coords + 1e-3 * V2(std::cos(t), std::sin(t));
      const V2 q2 = p.coords - 1e-3 * V2(std::cos(t), std::sin(t));
      if (Y.chart_value(p.chart, q).norm() < 1e-12 && Y.chart_value(p.chart, q2).norm() < 1e-12)
        throw Error("non_isolated_zeros", "field vanishes along a curve through a zero");
    }
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const SingularPoint& a, const SingularPoint& b) {
    for (int k : {2, 0, 1}) {
      const double x = std::round(a.position[k] * 1e6), y = std::round(b.position[k] * 1e6);
      if (x != y) return k == 2 ? x > y : x < y;
    }
    return false;
  });
  return out;
}

}  // namespace catlas
