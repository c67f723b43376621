#pragma once

#include "catlas/core.hpp"
#include "catlas/ode.hpp"
#include "catlas/polynomial.hpp"

#include <string>
#include <vector>

namespace catlas {

// Coordinate layouts:
//   standard, rotational, custom on R^{2n+1}: (x_1..x_n, y_1..y_n, z)
//   jet on R^{2n+1}: (u, Q_1..Q_n, P_1..P_n)
//   sphere_restriction on R^{2n+2}: (x_1..x_{n+1}, y_1..y_{n+1})
enum class FormKind { standard, rotational, jet, sphere_restriction, custom };

std::string to_string(FormKind kind);
FormKind form_kind_from_string(const std::string& s);

// A 1-form a(p).v with coefficient Jacobian D_jk = d a_j / d p_k.
// The exterior derivative is d_eval(p, v, w) = v^T (D^T - D) w.
struct OneForm {
  FormKind kind = FormKind::custom;
  int dim = 0;
  int n = 0;
  std::function<Vec(const Vec&)> coeffs;
  std::function<Mat(const Vec&)> coeff_jacobian;

  double eval(const Vec& p, const Vec& v) const { return coeffs(p).dot(v); }
  Mat d_matrix(const Vec& p) const;
  double d_eval(const Vec& p, const Vec& v, const Vec& w) const { return v.dot(d_matrix(p) * w); }
};

OneForm make_form(FormKind kind, int n);
// p.dq on R^{2m} with layout (q_1..q_m, p_1..p_m).
OneForm tautological_form(int m);
// Custom form with polynomial coefficients on R^N.
OneForm polynomial_form(const PolynomialMap& coeffs);
// Custom form from callables; the Jacobian falls back to central differences when empty.
OneForm custom_form(int dim, std::function<Vec(const Vec&)> coeffs,
                    std::function<Mat(const Vec&)> coeff_jacobian = {});

struct VectorField {
  int dim = 0;
  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> jac;            // empty: finite differences with step h
  std::function<Vec(const Vec&, double)> exact;  // analytic flow when known
  double h = 1e-5;

  Vec operator()(const Vec& p) const { return f(p); }
  Mat jacobian(const Vec& p) const { return jac ? jac(p) : fd_jacobian(f, p, h); }
};

struct ScalarField {
  int dim = 0;
  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> grad;  // empty: finite differences
  double h = 1e-5;

  double operator()(const Vec& p) const { return f(p); }
  Vec gradient(const Vec& p) const { return grad ? grad(p) : fd_gradient(f, p, h); }
};

ScalarField scalar_from_polynomial(const Polynomial& poly);
VectorField field_from_polynomials(const PolynomialMap& map);

VectorField reeb_field(const OneForm& form);
VectorField field_of_hamiltonian(const ScalarField& H, const OneForm& form);
ScalarField hamiltonian_of_field(const VectorField& X, const OneForm& form);

// V = (x, y, 2z) on R^{2n+1}, with analytic flow (e^t x, e^t y, e^{2t} z).
VectorField dilation_field(int n);
// (a x, b y, c z) with analytic flow.
VectorField linear_diagonal_field(int n, double a, double b, double c);
// -f(|p|) V with f a C^2 smoothstep equal to 1 on [0,R] and 0 beyond 2R.
VectorField cutoff_contraction_field(int n, double R);

// C^2 smoothstep: 0 for s <= 0, 1 for s >= 1.
double smoothstep(double s);
double smoothstep_derivative(double s);

Vec flow(const VectorField& X, const Vec& p, double t, const OdeParams& params = {});

struct ContactFieldSample {
  Vec point;
  double lambda = 0.0;
  double residual = 0.0;
};

struct ContactFieldReport {
  bool is_contact = false;
  double max_residual = 0.0;
  double tol = 0.0;
  std::vector<ContactFieldSample> samples;
};

// Checks L_X alpha = lambda alpha by differentiating the flow pullback at sample points in [-1,1]^N.
ContactFieldReport contact_field_report(const VectorField& X, const OneForm& form, int samples,
                                        double tol = 1e-6, std::uint64_t seed = 0);

// Smooth map R^N -> R^M with optional analytic Jacobian.
struct SmoothMap {
  std::string name;
  int dim_in = 0;
  int dim_out = 0;
  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> jac;

  Vec operator()(const Vec& p) const { return f(p); }
  Mat jacobian(const Vec& p, double h = 1e-3) const { return jac ? jac(p) : fd_jacobian_richardson(f, p, h); }
};

// A sample point with the tangent vectors (columns) on which the pullback is evaluated.
struct TangentSample {
  Vec point;
  Mat tangents;
};

struct PullbackSample {
  Vec point;
  double residual = 0.0;
  double factor = 0.0;
  double kernel_angle = 0.0;
  std::string error;
};

struct PullbackReport {
  int sample_count = 0;
  bool fitted = false;
  double claimed_factor = 0.0;
  double tol = 0.0;
  double max_residual = 0.0;
  double max_kernel_angle = 0.0;
  double min_factor = 0.0;
  double max_factor = 0.0;
  int failed_evaluations = 0;
  std::vector<PullbackSample> samples;
  std::optional<Vec> counterexample;

  bool passed() const { return !counterexample && failed_evaluations == 0; }
};

// Evaluates phi^* dst - g src on the supplied tangent vectors. g is fitted per sample when
// factor is empty. Residuals are scaled by max(1, |g| |src coefficients|). Never throws on
// identity failure; map evaluation errors are recorded per sample.
PullbackReport pullback_report(const SmoothMap& phi, const OneForm& src, const OneForm& dst,
                               std::optional<double> factor, const std::vector<TangentSample>& samples,
                               double tol);

// Points uniform in [-radius, radius]^N with the standard basis as tangents.
std::vector<TangentSample> box_samples(int dim, int count, Rng& rng, double radius = 1.0);

// Audited maps.
SmoothMap psi_normalizer(int n);
SmoothMap dilation_map(int n, double t);

using SphereMap = std::function<Vec(const Vec&)>;
// The rotation (r, phi_i, z) -> (r, -phi_i - 2z, z) on the unit sphere of R^{2n+1}.
SphereMap default_neck_rho(int n);
// Layer t with delta^{-t}(p) on the unit sphere.
double neck_layer(const Vec& p, int n);
Vec neck_involution(const Vec& p, int n, const SphereMap& rho = {});
SmoothMap neck_map(int n, const SphereMap& rho = {});

struct JetPoint {
  double u = 0.0;
  Vec Q;
  Vec P;
};

struct StandardPoint {
  double z = 0.0;
  Vec x;
  Vec y;
};

StandardPoint jet_to_standard(double u, const Vec& Q, const Vec& P);
// Same map on packed coordinates: (u, Q, P) -> (x, y, z) = (-P, Q, u).
SmoothMap jet_to_standard_map(int n);

// (q, p) with |p| = 1 -> (u, Q, P) = (<q,p>, p, q - <q,p> p).
JetPoint sphere_jet_iso(const Vec& q, const Vec& p);
SmoothMap sphere_jet_map(int n);
// Samples (q, p) with |p| = 1 and tangents (dq, dp) satisfying <p, dp> = 0.
std::vector<TangentSample> sphere_jet_samples(int n, int count, Rng& rng);

// Cotangent lift (q, p) -> (beta(q), (D beta(q)^T)^{-1} p).
std::pair<Vec, Vec> cotangent_lift(const SmoothMap& beta, const Vec& q, const Vec& p);
SmoothMap cotangent_lift_map(const SmoothMap& beta);
// Triangular polynomial diffeomorphism beta_i = a_i q_i + poly(q_1..q_{i-1}), a_i in [1, 2].
SmoothMap random_triangular_diffeo(int m, Rng& rng, int degree = 2, double scale = 0.3);

}  // namespace catlas
