#include "catlas/star_shaped.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>

namespace catlas {

VectorField LinearContactField::field() const {
  VectorField X;
  X.dim = 2 * n + 1;
  Mat M = L_inv * D.asDiagonal() * L;
  Vec c = center;
  X.f = [M, c](const Vec& p) { return Vec(M * (p - c)); };
  X.jac = [M](const Vec&) { return M; };
  LinearContactField self = *this;
  X.exact = [self](const Vec& p, double t) { return self.flow(p, t); };
  return X;
}

Vec LinearContactField::flow(const Vec& p, double t) const { return center + flow_jacobian(t) * (p - center); }

Mat LinearContactField::flow_jacobian(double t) const {
  return L_inv * (t * D).array().exp().matrix().asDiagonal() * L;
}

LinearContactField dilation_model(int n) {
  const int N = 2 * n + 1;
  LinearContactField m;
  m.n = n;
  m.L = m.L_inv = Mat::Identity(N, N);
  m.D = Vec::Ones(N);
  m.D[2 * n] = 2.0;
  m.center = Vec::Zero(N);
  return m;
}

namespace {

void validate(const Cuboid& Q) {
  const int N = 2 * Q.n + 1;
  if (Q.n < 1 || Q.center.size() != N || Q.a.size() != Q.n || Q.b.size() != Q.n)
    throw Error("dimension_mismatch", "cuboid data does not match dimension 2n+1");
  if (Q.c <= 0 || (Q.a.array() <= 0).any() || (Q.b.array() <= 0).any())
    throw Error("degenerate", "cuboid half-edges must be positive");
}

Vec half_edges(const Cuboid& Q) {
  Vec h(2 * Q.n + 1);
  h << Q.a, Q.b, Q.c;
  return h;
}

}  // namespace

LinearContactField cuboid_model(const Cuboid& Q, double eps) {
  validate(Q);
  const int n = Q.n, N = 2 * n + 1;
  LinearContactField m;
  m.n = n;
  m.L = Mat::Identity(N, N);
  m.L.block(2 * n, n, 1, n) = Q.center.head(n).transpose();
  m.L_inv = Mat::Identity(N, N);
  m.L_inv.block(2 * n, n, 1, n) = -Q.center.head(n).transpose();
  m.D.resize(N);
  m.D.head(n).setConstant(eps);
  m.D.segment(n, n).setConstant(1.0 + eps);
  m.D[2 * n] = 1.0 + 2.0 * eps;
  m.center = Q.center;
  return m;
}

CuboidCertificate cuboid_epsilon(const Cuboid& Q, int samples_per_face, std::uint64_t seed) {
  validate(Q);
  const int n = Q.n, N = 2 * n + 1;
  CuboidCertificate cert;
  cert.Mz = Q.center.head(n).cwiseAbs().dot(Q.b);
  cert.epsilon = Q.c / (2.0 * std::max(cert.Mz, Q.c));
  const double eps = cert.epsilon;
  cert.analytic_min_margin =
      std::min({eps * Q.a.minCoeff(), (1 + eps) * Q.b.minCoeff(), (1 + 2 * eps) * Q.c - eps * cert.Mz});
  VectorField Y = cuboid_model(Q, eps).field();
  Vec h = half_edges(Q);
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  cert.samples_per_face = samples_per_face;
  cert.sampled_min_margin = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < N; ++axis) {
    for (int side : {-1, 1}) {
      FaceMargin face{axis, side, std::numeric_limits<double>::infinity()};
      for (int s = 0; s < samples_per_face; ++s) {
        Vec off(N);
        for (int k = 0; k < N; ++k) off[k] = (k == axis ? side : u(rng)) * h[k];
        const double m = side * Y(Q.center + off)[axis];
        face.min_margin = std::min(face.min_margin, m);
        if (!(m > 0)) ++cert.failures;
      }
      cert.sampled_min_margin = std::min(cert.sampled_min_margin, face.min_margin);
      cert.faces.push_back(face);
    }
  }
  cert.pass = cert.failures == 0 && cert.analytic_min_margin > 0;
  return cert;
}

ScalarField ball_function(int dim, double radius) {
  ScalarField F;
  F.dim = dim;
  F.f = [radius](const Vec& p) { return p.squaredNorm() - radius * radius; };
  F.grad = [](const Vec& p) { return Vec(2.0 * p); };
  return F;
}

ScalarField shell_function(int dim, double r_in, double r_out) {
  ScalarField F;
  F.dim = dim;
  F.f = [r_in, r_out](const Vec& p) {
    const double s = p.squaredNorm();
    return (s - r_in * r_in) * (s - r_out * r_out);
  };
  F.grad = [r_in, r_out](const Vec& p) {
    const double s = p.squaredNorm();
    return Vec(2.0 * p * ((s - r_in * r_in) + (s - r_out * r_out)));
  };
  return F;
}

ScalarField cuboid_function(const Cuboid& Q) {
  validate(Q);
  Vec h = half_edges(Q);
  Vec c = Q.center;
  ScalarField F;
  F.dim = 2 * Q.n + 1;
  F.f = [h, c](const Vec& p) { return ((p - c).cwiseAbs().cwiseQuotient(h)).maxCoeff() - 1.0; };
  F.grad = [h, c](const Vec& p) {
    Vec r = (p - c).cwiseQuotient(h);
    Eigen::Index k;
    r.cwiseAbs().maxCoeff(&k);
    Vec g = Vec::Zero(p.size());
    g[k] = (r[k] >= 0 ? 1.0 : -1.0) / h[k];
    return g;
  };
  return F;
}

namespace {

std::optional<Vec> find_zero(const VectorField& X, const Vec& start) {
  Vec p = start;
  for (int it = 0; it < 100; ++it) {
    Vec v = X(p);
    if (v.norm() < 1e-13 * (1.0 + p.norm())) return p;
    Vec step = X.jacobian(p).fullPivLu().solve(v);
    if (!step.allFinite()) return std::nullopt;
    p -= step;
  }
  if (X(p).norm() < 1e-10) return p;
  return std::nullopt;
}

// Flows in the given time direction with doubling horizons until the predicate holds.
bool reaches(const VectorField& X, const Vec& p, double dir, const std::function<bool(const Vec&)>& done) {
  for (double T = 10.0; T <= 1e4; T *= 2.0) {
    try {
      if (done(flow(X, p, dir * T))) return true;
    } catch (const Error& e) {
      // Blow-up in finite time leaves every bounded set.
      return dir > 0 && e.code() == "step_underflow";
    }
  }
  return false;
}

}  // namespace

StarShapedCertificate star_shaped_report(const ScalarField& F, const VectorField& X, int samples,
                                         double box_radius, std::uint64_t seed) {
  if (samples < 1) throw Error("invalid_argument", "samples < 1");
  if (F.dim != X.dim) throw Error("dimension_mismatch", "defining function and field dimensions differ");
  const int N = X.dim;
  StarShapedCertificate cert;
  Rng rng(seed);

  // Boundedness: F > 0 on the surface of the bounding box.
  cert.bounded = true;
  for (int s = 0; s < 200 * N; ++s) {
    Vec p = uniform_vec(rng, N, -box_radius, box_radius);
    p[s % N] = (s / N) % 2 ? box_radius : -box_radius;
    if (F(p) <= 0) {
      cert.bounded = false;
      cert.diagnostics.push_back("domain meets the bounding box surface");
      break;
    }
  }

  for (int attempt = 0; attempt < 50 && !cert.zero_found; ++attempt) {
    Vec start = attempt == 0 ? Vec(Vec::Zero(N)) : uniform_vec(rng, N, -box_radius, box_radius);
    if (auto z = find_zero(X, start)) {
      cert.zero_found = true;
      cert.zero = *z;
    }
  }
  if (!cert.zero_found) {
    cert.diagnostics.push_back("no zero of the field found");
    return cert;
  }
  cert.zero_in_domain = F(cert.zero) < 0;
  if (!cert.zero_in_domain) cert.diagnostics.push_back("zero of the field lies outside the domain");

  cert.min_margin = std::numeric_limits<double>::infinity();
  const double ray_len = 2.0 * box_radius * std::sqrt(static_cast<double>(N));
  const int steps = 400;
  bool converge = true, escape = true;
  for (int s = 0; s < samples; ++s) {
    Vec dir = gaussian_vec(rng, N).normalized();
    int crossings = 0;
    double prev_r = 0.0, prev_f = F(cert.zero);
    for (int k = 1; k <= steps; ++k) {
      const double r = ray_len * k / steps;
      const double f = F(cert.zero + r * dir);
      if ((prev_f < 0) != (f < 0)) {
        ++crossings;
        auto g = [&](double t) { return F(cert.zero + t * dir); };
        boost::math::tools::eps_tolerance<double> tol(50);
        std::uintmax_t iters = 100;
        auto [lo, hi] = boost::math::tools::bisect(g, prev_r, r, tol, iters);
        Vec b = cert.zero + 0.5 * (lo + hi) * dir;
        BoundarySample bs;
        bs.point = b;
        Vec gF = F.gradient(b), xb = X(b);
        bs.derivative = gF.dot(xb);
        const double denom = gF.norm() * xb.norm();
        bs.margin = denom > 0 ? bs.derivative / denom : 0.0;
        cert.min_margin = std::min(cert.min_margin, bs.margin);
        if (s < 64 && crossings == 1) {
          converge = converge && reaches(X, b, -1.0, [&](const Vec& q) {
                       return (q - cert.zero).norm() < 1e-6 * (1.0 + box_radius);
                     });
          escape = escape && reaches(X, b, 1.0, [&](const Vec& q) { return q.norm() > 100.0 * box_radius; });
        }
        cert.boundary.push_back(std::move(bs));
      }
      prev_r = r;
      prev_f = f;
    }
    cert.max_crossings = std::max(cert.max_crossings, crossings);
  }
  cert.backward_converges = converge;
  cert.forward_escapes = escape;
  if (cert.max_crossings != 1)
    cert.diagnostics.push_back("a ray from the zero crosses the boundary " + std::to_string(cert.max_crossings) + " times");
  if (!(cert.min_margin > 0)) cert.diagnostics.push_back("field is not outward transverse at some boundary point");
  if (!converge) cert.diagnostics.push_back("backward flow from the boundary does not reach the zero");
  if (!escape) cert.diagnostics.push_back("forward flow from the boundary stays bounded");
  cert.pass = cert.bounded && cert.zero_in_domain && cert.max_crossings == 1 && cert.min_margin > 0 && converge &&
              escape && !cert.boundary.empty();
  return cert;
}

Uniformizer::Uniformizer(ScalarField F, LinearContactField X)
    : F_(std::move(F)), X_(std::move(X)), field_(X_.field()), form_(make_form(FormKind::standard, X_.n)) {}

double Uniformizer::sigma(int k) { return -std::log1p(-std::ldexp(1.0, -k)); }

double Uniformizer::time_to_boundary(const Vec& u) const {
  const double f0 = F_(u);
  if (f0 == 0.0) return 0.0;
  const double dir = f0 < 0 ? 1.0 : -1.0;
  auto g = [&](double tau) { return F_(X_.flow(u, dir * tau)); };
  double lo = 0.0, hi = 0.125;
  while ((g(hi) < 0) == (f0 < 0)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e3) throw Error("integrator_failure", "flow line does not reach the boundary");
  }
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, tol, iters);
  return dir * 0.5 * (a + b);
}

double Uniformizer::level(const Vec& u) const {
  if ((u - X_.center).norm() == 0.0) return -std::numeric_limits<double>::infinity();
  return -time_to_boundary(u);
}

Vec Uniformizer::level_gradient(const Vec& u) const {
  const double tau = time_to_boundary(u);
  Vec b = X_.flow(u, tau);
  Vec gF = F_.gradient(b);
  return X_.flow_jacobian(tau).transpose() * gF / gF.dot(field_(b));
}

int Uniformizer::layer(const Vec& u) const {
  const double T = level(u);
  if (T >= 0) throw Error("outside_domain", "point is not in the domain");
  if (T < -sigma(1)) return 0;
  int k = 1;
  while (T >= -sigma(k + 1)) ++k;
  return k;
}

Vec Uniformizer::layer_flow(const Vec& u, int k) const {
  const double a = -sigma(k), b = -sigma(k + 1);
  const double c = k, d = k + 1;
  const double d_prime = d - c + a;
  const double q1 = a + (b - a) / 3.0, q2 = a + 2.0 * (b - a) / 3.0;
  ScalarField H = hamiltonian_of_field(field_, form_);
  ScalarField G;
  G.dim = field_.dim;
  G.f = [this, H, q1, q2](const Vec& p) {
    if (F_(p) >= 0) return H(p);
    return smoothstep((level(p) - q1) / (q2 - q1)) * H(p);
  };
  G.grad = [this, H, q1, q2](const Vec& p) {
    if (F_(p) >= 0) return H.gradient(p);
    const double T = level(p);
    const double s = (T - q1) / (q2 - q1);
    if (s <= 0) return Vec(Vec::Zero(p.size()));
    if (s >= 1) return H.gradient(p);
    return Vec(smoothstep(s) * H.gradient(p) + H(p) * smoothstep_derivative(s) / (q2 - q1) * level_gradient(p));
  };
  VectorField XG = field_of_hamiltonian(G, form_);
  OdeParams params;
  params.abs_tol = 1e-13;
  params.rel_tol = 1e-12;
  Vec v = integrate(XG.f, u, d_prime - b, params);
  return X_.flow(v, c - a);
}

Vec Uniformizer::operator()(const Vec& u) const {
  const double T = level(u);
  if (!(T < 0)) throw Error("outside_domain", "point is not in the domain");
  if (T < -sigma(1)) return X_.flow(u, 1.0 + sigma(1));
  return layer_flow(u, layer(u));
}

SmoothMap Uniformizer::as_map() const {
  SmoothMap m;
  m.name = "uniformization";
  m.dim_in = m.dim_out = field_.dim;
  Uniformizer self = *this;
  m.f = [self](const Vec& u) { return self(u); };
  return m;
}

}  // namespace catlas
