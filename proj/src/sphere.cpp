#include "catlas/foliation.hpp"

#include <cmath>

namespace catlas {

std::string to_string(Chart c) { return c == Chart::north ? "north" : "south"; }

std::string to_string(Provenance p) { return p == Provenance::characteristic ? "characteristic" : "synthetic"; }

V2 SphereSurface::chart_coords(Chart c, const V3& u) {
  if (c == Chart::north) return V2(u.x(), u.y()) / (1.0 + u.z());
  return V2(u.x(), -u.y()) / (1.0 - u.z());
}

V3 SphereSurface::chart_point(Chart c, const V2& w) {
  const double q = 1.0 + w.squaredNorm();
  if (c == Chart::north) return V3(2 * w.x(), 2 * w.y(), 2.0 - q) / q;
  return V3(2 * w.x(), -2 * w.y(), q - 2.0) / q;
}

Eigen::Matrix<double, 3, 2> SphereSurface::chart_tangents(Chart c, const V2& w) {
  const double q = 1.0 + w.squaredNorm();
  const double q2 = q * q;
  Eigen::Matrix<double, 3, 2> T;
  T(0, 0) = 2.0 / q - 4 * w.x() * w.x() / q2;
  T(0, 1) = -4 * w.x() * w.y() / q2;
  T(1, 0) = -4 * w.x() * w.y() / q2;
  T(1, 1) = 2.0 / q - 4 * w.y() * w.y() / q2;
  T(2, 0) = -4 * w.x() / q2;
  T(2, 1) = -4 * w.y() / q2;
  if (c == Chart::south) {
    T.row(1) *= -1.0;
    T.row(2) *= -1.0;
  }
  return T;
}

Eigen::Matrix<double, 2, 3> SphereSurface::chart_differential(Chart c, const V3& u) {
  Eigen::Matrix<double, 2, 3> D;
  if (c == Chart::north) {
    const double a = 1.0 + u.z();
    D << 1 / a, 0, -u.x() / (a * a), 0, 1 / a, -u.y() / (a * a);
  } else {
    const double a = 1.0 - u.z();
    D << 1 / a, 0, u.x() / (a * a), 0, -1 / a, -u.y() / (a * a);
  }
  return D;
}

Chart SphereSurface::chart_for(const V3& u) { return u.z() >= 0 ? Chart::north : Chart::south; }

V2 SphereSurface::transition(Chart, const V2& w) {
  // Both transitions are w -> 1 / w as a complex number.
  return V2(w.x(), -w.y()) / w.squaredNorm();
}

M2 SphereSurface::transition_jacobian(Chart, const V2& w) {
  // d(1/w) = -1/w^2 dw.
  std::complex<double> z(w.x(), w.y());
  std::complex<double> d = -1.0 / (z * z);
  M2 J;
  J << d.real(), -d.imag(), d.imag(), d.real();
  return J;
}

V3 TangentField::operator()(const V3& u) const {
  const V3 n = u.normalized();
  const V3 y = field(n);
  return y - y.dot(n) * n;
}

V2 TangentField::chart_value(Chart c, const V2& w) const {
  const V3 u = SphereSurface::chart_point(c, w);
  return SphereSurface::chart_differential(c, u) * (*this)(u);
}

M2 TangentField::chart_jacobian(Chart c, const V2& w, double h) const {
  M2 J;
  const double step = h * (1.0 + w.norm());
  for (int k = 0; k < 2; ++k) {
    V2 e = V2::Zero();
    e[k] = step;
    J.col(k) = (chart_value(c, w + e) - chart_value(c, w - e)) / (2 * step);
  }
  return J;
}

double TangentField::divergence(Chart c, const V2& w, double h) const {
  // Area density 4 / q^2 (up to a constant), so div = tr J + Y . grad log density.
  const double q = 1.0 + w.squaredNorm();
  return chart_jacobian(c, w, h).trace() - 4.0 * w.dot(chart_value(c, w)) / q;
}

TangentField characteristic_field(const OneForm& alpha, const SphereSurface& S, const std::string& name) {
  if (alpha.dim != 3) throw Error("schema", "characteristic fields need a form on R^3");
  TangentField Y;
  Y.name = name.empty() ? to_string(alpha.kind) : name;
  Y.provenance = Provenance::characteristic;
  Y.surface = S;
  Y.field = [alpha, S](const V3& u) -> V3 {
    const V3 p = S.to_world(u);
    Vec a = alpha.coeffs(Vec(p));
    return V3(a[0], a[1], a[2]).cross(u) / S.radius;
  };
  return Y;
}

V2 characteristic_chart_value(const OneForm& alpha, const SphereSurface& S, Chart c, const V2& w) {
  const V3 u = SphereSurface::chart_point(c, w);
  const Eigen::Matrix<double, 3, 2> T = S.radius * SphereSurface::chart_tangents(c, w);
  Vec a = alpha.coeffs(Vec(S.to_world(u)));
  const V3 av(a[0], a[1], a[2]);
  const double a1 = av.dot(T.col(0));
  const double a2 = av.dot(T.col(1));
  const double omega = u.dot(V3(T.col(0)).cross(V3(T.col(1))));
  if (!(omega > 0)) throw Error("degenerate_area_form", "area form vanishes at a chart point");
  // i_Y (omega dw1 ^ dw2) = a1 dw1 + a2 dw2.
  return V2(a2, -a1) / omega;
}

OneForm dz_form() {
  return custom_form(
      3, [](const Vec&) { return Vec(Eigen::Vector3d(0, 0, 1)); },
      [](const Vec&) { return Mat(Mat::Zero(3, 3)); });
}

namespace {

// sin r / r and (r cos r - sin r) / r^3, with series near 0.
double sinc(double r) { return r < 1e-4 ? 1.0 - r * r / 6.0 : std::sin(r) / r; }
double sinc_slope(double r) {
  return r < 1e-3 ? -1.0 / 3.0 + r * r / 30.0 : (r * std::cos(r) - std::sin(r)) / (r * r * r);
}

}  // namespace

OneForm overtwisted_form() {
  auto coeffs = [](const Vec& p) {
    const double r = std::hypot(p[0], p[1]);
    const double g = sinc(r);
    return Vec(Eigen::Vector3d(-p[1] * g, p[0] * g, std::cos(r)));
  };
  auto jac = [](const Vec& p) {
    const double x = p[0], y = p[1];
    const double r = std::hypot(x, y);
    const double g = sinc(r), k = sinc_slope(r);
    Mat J = Mat::Zero(3, 3);
    J(0, 0) = -x * y * k;
    J(0, 1) = -g - y * y * k;
    J(1, 0) = g + x * x * k;
    J(1, 1) = x * y * k;
    J(2, 0) = -x * g;
    J(2, 1) = -y * g;
    return J;
  };
  return custom_form(3, coeffs, jac);
}

TangentField height_gradient_field() {
  TangentField Y;
  Y.name = "height_gradient";
  Y.field = [](const V3& u) -> V3 { return V3(u.z() * u.x(), u.z() * u.y(), u.z() * u.z() - 1.0); };
  return Y;
}

TangentField rotation_field(double omega) {
  TangentField Y;
  Y.name = "rotation";
  Y.field = [omega](const V3& u) -> V3 { return V3(-omega * u.y(), omega * u.x(), 0.0); };
  return Y;
}

TangentField equator_cycle_field(CycleProfile profile, double omega) {
  TangentField Y;
  Y.name = profile == CycleProfile::attracting  ? "equator_cycle_attracting"
           : profile == CycleProfile::repelling ? "equator_cycle_repelling"
                                                : "equator_cycle_semistable";
  Y.field = [profile, omega](const V3& u) -> V3 {
    const double z = u.z();
    const double f = profile == CycleProfile::attracting ? -z : profile == CycleProfile::repelling ? z : z * z;
    const V3 meridian = V3(0, 0, 1) - z * u;
    return V3(-omega * u.y(), omega * u.x(), 0.0) + f * meridian;
  };
  return Y;
}

TangentField projected_field(const PolynomialMap& V, const std::string& name) {
  if (V.components.size() != 3) throw Error("schema", "projected field needs three components");
  TangentField Y;
  Y.name = name;
  Y.field = [V](const V3& u) -> V3 {
    Vec v = V(Vec(u));
    return V3(v[0], v[1], v[2]);
  };
  return Y;
}

TangentField projected_linear_field(const Eigen::Matrix3d& M, const std::string& name) {
  TangentField Y;
  Y.name = name;
  Y.field = [M](const V3& u) -> V3 { return V3(M * u); };
  return Y;
}

TangentField apply_patch(const TangentField& Y, const PatchSpec& patch) {
  const V3 c = patch.center.normalized();
  const V3 y0 = Y(c);
  const double v = y0.norm();
  if (!(v > 1e-9)) throw Error("patch_failed", "patch center is a singular point");
  if (!(patch.radius > 0 && patch.radius < 0.5)) throw Error("patch_failed", "patch radius must lie in (0, 0.5)");
  const V3 e_xi = y0 / v;
  const V3 e_eta = c.cross(e_xi);
  const double rho = patch.radius;
  const double eps = rho / 4.0;
  TangentField out = Y;
  out.provenance = Provenance::synthetic;
  out.name = Y.name + "+patch";
  out.field = [base = Y, c, e_xi, e_eta, v, rho, eps, patch](const V3& u) -> V3 {
    const V3 y = base(u);
    const V3 d = u - c;
    const double dist = d.norm();
    if (dist >= rho) return y;
    const double beta = 1.0 - smoothstep((dist - rho / 2) / (rho / 2));
    const double xi = d.dot(e_xi) / eps;
    const double eta = d.dot(e_eta) / eps;
    V3 W = v * (xi * xi - patch.split) * e_xi + v * patch.rate * eta * e_eta;
    W -= W.dot(u) * u;
    return (1.0 - beta) * y + beta * W;
  };
  return out;
}

}  // namespace catlas
