#pragma once

#include "catlas/contact_core.hpp"

#include <vector>

namespace catlas {

// Axis-aligned cuboid in R^{2n+1}: |x - x0| <= a, |y - y0| <= b, |z - z0| <= c.
struct Cuboid {
  int n = 1;
  Vec center;  // (x0, y0, z0)
  Vec a;       // x half-edges
  Vec b;       // y half-edges
  double c = 1.0;
};

// Contact field X(p) = L^{-1} diag(D) L (p - center), i.e. a diagonal linear field
// conjugated by the affine map p -> L (p - center). Flows are analytic.
struct LinearContactField {
  int n = 1;
  Mat L;
  Mat L_inv;
  Vec D;
  Vec center;

  VectorField field() const;
  Vec flow(const Vec& p, double t) const;
  Mat flow_jacobian(double t) const;
};

LinearContactField dilation_model(int n);
// (tau^{-1})_* X_eps for the cuboid, with tau(p) = (x - x0, y - y0, z - z0 + x0.(y - y0)).
LinearContactField cuboid_model(const Cuboid& Q, double eps);

struct FaceMargin {
  int axis = 0;
  int side = 0;  // -1 or +1
  double min_margin = 0.0;
};

struct CuboidCertificate {
  double epsilon = 0.0;
  double Mz = 0.0;
  double analytic_min_margin = 0.0;
  double sampled_min_margin = 0.0;
  int samples_per_face = 0;
  int failures = 0;
  std::vector<FaceMargin> faces;
  bool pass = false;
};

// eps = c / (2 max(Mz, c)) with Mz = sum_i |x0_i| b_i, plus sampled outward margins of the field
// on every face of the cuboid.
CuboidCertificate cuboid_epsilon(const Cuboid& Q, int samples_per_face = 1000, std::uint64_t seed = 0);

ScalarField ball_function(int dim, double radius = 1.0);
ScalarField shell_function(int dim, double r_in, double r_out);
ScalarField cuboid_function(const Cuboid& Q);

struct BoundarySample {
  Vec point;
  double derivative = 0.0;  // dF(X)
  double margin = 0.0;      // dF(X) / (|dF| |X|)
};

struct StarShapedCertificate {
  std::vector<BoundarySample> boundary;
  double min_margin = 0.0;
  int max_crossings = 0;
  bool zero_found = false;
  bool zero_in_domain = false;
  Vec zero;
  bool backward_converges = false;
  bool forward_escapes = false;
  bool bounded = false;
  std::vector<std::string> diagnostics;
  bool pass = false;
};

// Boundary samples come from rays cast from the zero of X; box_radius bounds U and sets the ray length.
StarShapedCertificate star_shaped_report(const ScalarField& F, const VectorField& X, int samples,
                                         double box_radius, std::uint64_t seed = 0);

// Gluing map from a contact star-shaped domain U = {F < 0} onto R^{2n+1}.
// Layer times sigma_k = -ln(1 - 2^{-k}) and target times r_k = k.
class Uniformizer {
 public:
  Uniformizer(ScalarField F, LinearContactField X);

  // T(u) with phi_X^{-T}(u) on the boundary; -infinity at the zero of X.
  double level(const Vec& u) const;
  Vec level_gradient(const Vec& u) const;
  // Layer index k >= 1 with u in U_{-sigma_{k+1}} minus U_{-sigma_k} (k = 0 for U_{-sigma_1}).
  int layer(const Vec& u) const;
  Vec operator()(const Vec& u) const;
  SmoothMap as_map() const;

  static double sigma(int k);

 private:
  double time_to_boundary(const Vec& u) const;
  Vec layer_flow(const Vec& u, int k) const;

  ScalarField F_;
  LinearContactField X_;
  VectorField field_;
  OneForm form_;
};

}  // namespace catlas
