#include "catlas/contact_core.hpp"

#include <cmath>

namespace catlas {

std::string to_string(FormKind kind) {
  switch (kind) {
    case FormKind::standard: return "standard";
    case FormKind::rotational: return "rotational";
    case FormKind::jet: return "jet";
    case FormKind::sphere_restriction: return "sphere_restriction";
    case FormKind::custom: return "custom";
  }
  return "custom";
}

FormKind form_kind_from_string(const std::string& s) {
  if (s == "standard") return FormKind::standard;
  if (s == "rotational") return FormKind::rotational;
  if (s == "jet") return FormKind::jet;
  if (s == "sphere_restriction") return FormKind::sphere_restriction;
  if (s == "custom") return FormKind::custom;
  throw Error("unknown_kind", "unknown form kind '" + s + "'");
}

Mat OneForm::d_matrix(const Vec& p) const {
  Mat D = coeff_jacobian(p);
  return D.transpose() - D;
}

OneForm make_form(FormKind kind, int n) {
  if (n < 1) throw Error("invalid_argument", "n < 1");
  OneForm form;
  form.kind = kind;
  form.n = n;
  switch (kind) {
    case FormKind::standard: {
      form.dim = 2 * n + 1;
      form.coeffs = [n](const Vec& p) {
        Vec a = Vec::Zero(2 * n + 1);
        a.segment(n, n) = p.head(n);
        a[2 * n] = 1.0;
        return a;
      };
      form.coeff_jacobian = [n](const Vec&) {
        Mat D = Mat::Zero(2 * n + 1, 2 * n + 1);
        for (int i = 0; i < n; ++i) D(n + i, i) = 1.0;
        return D;
      };
      break;
    }
    case FormKind::rotational: {
      form.dim = 2 * n + 1;
      form.coeffs = [n](const Vec& p) {
        Vec a(2 * n + 1);
        a.head(n) = -p.segment(n, n);
        a.segment(n, n) = p.head(n);
        a[2 * n] = 1.0;
        return a;
      };
      form.coeff_jacobian = [n](const Vec&) {
        Mat D = Mat::Zero(2 * n + 1, 2 * n + 1);
        for (int i = 0; i < n; ++i) {
          D(i, n + i) = -1.0;
          D(n + i, i) = 1.0;
        }
        return D;
      };
      break;
    }
    case FormKind::jet: {
      form.dim = 2 * n + 1;
      form.coeffs = [n](const Vec& p) {
        Vec a = Vec::Zero(2 * n + 1);
        a[0] = 1.0;
        a.segment(1, n) = -p.segment(1 + n, n);
        return a;
      };
      form.coeff_jacobian = [n](const Vec&) {
        Mat D = Mat::Zero(2 * n + 1, 2 * n + 1);
        for (int i = 0; i < n; ++i) D(1 + i, 1 + n + i) = -1.0;
        return D;
      };
      break;
    }
    case FormKind::sphere_restriction: {
      const int m = n + 1;
      form.dim = 2 * m;
      form.coeffs = [m](const Vec& p) {
        Vec a(2 * m);
        a.head(m) = -p.tail(m);
        a.tail(m) = p.head(m);
        return a;
      };
      form.coeff_jacobian = [m](const Vec&) {
        Mat D = Mat::Zero(2 * m, 2 * m);
        for (int i = 0; i < m; ++i) {
          D(i, m + i) = -1.0;
          D(m + i, i) = 1.0;
        }
        return D;
      };
      break;
    }
    case FormKind::custom:
      throw Error("unknown_kind", "custom forms are built with polynomial_form or custom_form");
  }
  return form;
}

OneForm tautological_form(int m) {
  if (m < 1) throw Error("invalid_argument", "m < 1");
  OneForm form;
  form.kind = FormKind::custom;
  form.dim = 2 * m;
  form.n = m;
  form.coeffs = [m](const Vec& p) {
    Vec a = Vec::Zero(2 * m);
    a.head(m) = p.tail(m);
    return a;
  };
  form.coeff_jacobian = [m](const Vec&) {
    Mat D = Mat::Zero(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) D(i, m + i) = 1.0;
    return D;
  };
  return form;
}

OneForm polynomial_form(const PolynomialMap& coeffs) {
  const int dim = static_cast<int>(coeffs.components.size());
  OneForm form;
  form.kind = FormKind::custom;
  form.dim = dim;
  form.n = (dim - 1) / 2;
  form.coeffs = [coeffs](const Vec& p) { return coeffs(p); };
  form.coeff_jacobian = [coeffs](const Vec& p) { return coeffs.jacobian(p); };
  return form;
}

OneForm custom_form(int dim, std::function<Vec(const Vec&)> coeffs, std::function<Mat(const Vec&)> coeff_jacobian) {
  OneForm form;
  form.kind = FormKind::custom;
  form.dim = dim;
  form.n = (dim - 1) / 2;
  form.coeffs = coeffs;
  if (coeff_jacobian)
    form.coeff_jacobian = std::move(coeff_jacobian);
  else
    form.coeff_jacobian = [coeffs](const Vec& p) { return fd_jacobian(coeffs, p); };
  return form;
}

ScalarField scalar_from_polynomial(const Polynomial& poly) {
  ScalarField H;
  H.dim = poly.nvars();
  H.f = [poly](const Vec& p) { return poly(p); };
  H.grad = [poly](const Vec& p) { return poly.gradient(p); };
  return H;
}

VectorField field_from_polynomials(const PolynomialMap& map) {
  VectorField X;
  X.dim = static_cast<int>(map.components.size());
  X.f = [map](const Vec& p) { return map(p); };
  X.jac = [map](const Vec& p) { return map.jacobian(p); };
  return X;
}

namespace {

Mat stacked_system(const OneForm& form, const Vec& p) {
  const int N = form.dim;
  Mat A(N + 1, N);
  A.row(0) = form.coeffs(p).transpose();
  A.bottomRows(N) = form.d_matrix(p).transpose();
  return A;
}

Vec solve_reeb(const OneForm& form, const Vec& p) {
  Vec rhs = Vec::Zero(form.dim + 1);
  rhs[0] = 1.0;
  return stacked_system(form, p).completeOrthogonalDecomposition().solve(rhs);
}

}  // namespace

VectorField reeb_field(const OneForm& form) {
  VectorField R;
  R.dim = form.dim;
  if (form.kind == FormKind::standard || form.kind == FormKind::rotational) {
    const int N = form.dim;
    R.f = [N](const Vec&) {
      Vec e = Vec::Zero(N);
      e[N - 1] = 1.0;
      return e;
    };
    R.jac = [N](const Vec&) { return Mat::Zero(N, N); };
    R.exact = [N](const Vec& p, double t) {
      Vec q = p;
      q[N - 1] += t;
      return q;
    };
    return R;
  }
  if (form.kind == FormKind::custom) {
    R.f = [form](const Vec& p) { return solve_reeb(form, p); };
    return R;
  }
  throw Error("unsupported_kind", "reeb_field supports standard, rotational and custom forms, got " + to_string(form.kind));
}

VectorField field_of_hamiltonian(const ScalarField& H, const OneForm& form) {
  if (H.dim != form.dim) throw Error("dimension_mismatch", "Hamiltonian and form dimensions differ");
  VectorField X;
  X.dim = form.dim;
  if (form.kind == FormKind::standard) {
    const int n = form.n;
    X.f = [H, n](const Vec& p) {
      Vec g = H.gradient(p);
      Vec out(2 * n + 1);
      const double Hz = g[2 * n];
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        out[i] = p[i] * Hz - g[n + i];
        out[n + i] = g[i];
        sum += p[i] * g[i];
      }
      out[2 * n] = H(p) - sum;
      return out;
    };
    return X;
  }
  if (form.kind == FormKind::custom) {
    X.f = [H, form](const Vec& p) {
      Vec g = H.gradient(p);
      Vec R = solve_reeb(form, p);
      Vec rhs(form.dim + 1);
      rhs[0] = H(p);
      rhs.tail(form.dim) = R.dot(g) * form.coeffs(p) - g;
      return Vec(stacked_system(form, p).completeOrthogonalDecomposition().solve(rhs));
    };
    return X;
  }
  throw Error("unsupported_kind", "field_of_hamiltonian supports standard and custom forms, got " + to_string(form.kind));
}

ScalarField hamiltonian_of_field(const VectorField& X, const OneForm& form) {
  if (X.dim != form.dim) throw Error("dimension_mismatch", "field and form dimensions differ");
  ScalarField H;
  H.dim = form.dim;
  H.f = [X, form](const Vec& p) { return form.coeffs(p).dot(X(p)); };
  H.grad = [X, form](const Vec& p) {
    return Vec(form.coeff_jacobian(p).transpose() * X(p) + X.jacobian(p).transpose() * form.coeffs(p));
  };
  return H;
}

VectorField linear_diagonal_field(int n, double a, double b, double c) {
  const int N = 2 * n + 1;
  Vec diag(N);
  diag.head(n).setConstant(a);
  diag.segment(n, n).setConstant(b);
  diag[2 * n] = c;
  VectorField X;
  X.dim = N;
  X.f = [diag](const Vec& p) { return Vec(diag.cwiseProduct(p)); };
  X.jac = [diag](const Vec&) { return Mat(diag.asDiagonal()); };
  X.exact = [diag](const Vec& p, double t) { return Vec((t * diag).array().exp().matrix().cwiseProduct(p)); };
  return X;
}

VectorField dilation_field(int n) { return linear_diagonal_field(n, 1.0, 1.0, 2.0); }

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double smoothstep_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return 30.0 * s * s * (1.0 - s) * (1.0 - s);
}

VectorField cutoff_contraction_field(int n, double R) {
  if (R <= 0) throw Error("invalid_argument", "cutoff radius must be positive");
  VectorField V = dilation_field(n);
  VectorField X;
  X.dim = V.dim;
  X.f = [V, R](const Vec& p) {
    const double cut = 1.0 - smoothstep((p.norm() - R) / R);
    return Vec(-cut * V(p));
  };
  return X;
}

Vec flow(const VectorField& X, const Vec& p, double t, const OdeParams& params) {
  if (X.exact) return X.exact(p, t);
  return integrate(X.f, p, t, params);
}

namespace {

// alpha(phi_t p)(D phi_t e_k) for all k, with the flow and its derivative from fixed-step RK4.
Vec pulled_back_coeffs(const VectorField& X, const OneForm& form, const Vec& p, double t) {
  const int N = X.dim;
  Rhs aug = [&X, N](const Vec& s) {
    Vec x = s.head(N);
    Eigen::Map<const Mat> Phi(s.data() + N, N, N);
    Vec out(N + N * N);
    out.head(N) = X(x);
    Mat JP = X.jacobian(x) * Phi;
    out.tail(N * N) = Eigen::Map<const Vec>(JP.data(), N * N);
    return out;
  };
  Vec s0(N + N * N);
  s0.head(N) = p;
  Mat I = Mat::Identity(N, N);
  s0.tail(N * N) = Eigen::Map<const Vec>(I.data(), N * N);
  Vec s = rk4(aug, s0, t, 8);
  Eigen::Map<const Mat> Phi(s.data() + N, N, N);
  return Phi.transpose() * form.coeffs(s.head(N));
}

}  // namespace

ContactFieldReport contact_field_report(const VectorField& X, const OneForm& form, int samples, double tol,
                                        std::uint64_t seed) {
  if (samples < 1) throw Error("invalid_argument", "samples < 1");
  if (X.dim != form.dim) throw Error("dimension_mismatch", "field and form dimensions differ");
  ContactFieldReport report;
  report.tol = tol;
  Rng rng(seed);
  const double h = 1e-3;
  for (int i = 0; i < samples; ++i) {
    Vec p = uniform_vec(rng, X.dim, -1.0, 1.0);
    Vec d1 = (pulled_back_coeffs(X, form, p, h) - pulled_back_coeffs(X, form, p, -h)) / (2 * h);
    Vec d2 = (pulled_back_coeffs(X, form, p, h / 2) - pulled_back_coeffs(X, form, p, -h / 2)) / h;
    Vec lie = (4.0 * d2 - d1) / 3.0;
    Vec a = form.coeffs(p);
    ContactFieldSample s;
    s.point = p;
    s.lambda = a.squaredNorm() > 0 ? lie.dot(a) / a.squaredNorm() : 0.0;
    s.residual = (lie - s.lambda * a).lpNorm<Eigen::Infinity>();
    report.max_residual = std::max(report.max_residual, s.residual);
    report.samples.push_back(std::move(s));
  }
  report.is_contact = report.max_residual <= tol;
  return report;
}

PullbackReport pullback_report(const SmoothMap& phi, const OneForm& src, const OneForm& dst,
                               std::optional<double> factor, const std::vector<TangentSample>& samples,
                               double tol) {
  if (samples.empty()) throw Error("invalid_argument", "samples < 1");
  if (phi.dim_in != src.dim || phi.dim_out != dst.dim)
    throw Error("dimension_mismatch", "map dimensions do not match the forms");
  PullbackReport report;
  report.sample_count = static_cast<int>(samples.size());
  report.fitted = !factor.has_value();
  report.claimed_factor = factor.value_or(0.0);
  report.tol = tol;
  report.min_factor = std::numeric_limits<double>::infinity();
  report.max_factor = -std::numeric_limits<double>::infinity();
  int worst = -1;
  for (const auto& sample : samples) {
    PullbackSample out;
    out.point = sample.point;
    try {
      Vec q = phi(sample.point);
      Mat J = phi.jacobian(sample.point);
      if (!q.allFinite() || !J.allFinite()) throw Error("nan", "non-finite map value");
      Vec ad = dst.coeffs(q);
      Mat JT = J * sample.tangents;
      Vec lhs = JT.transpose() * ad;
      Vec rhs = sample.tangents.transpose() * src.coeffs(sample.point);
      double g = factor.value_or(rhs.squaredNorm() > 0 ? lhs.dot(rhs) / rhs.squaredNorm() : 0.0);
      out.factor = g;
      const double scale = std::max(1.0, std::abs(g) * src.coeffs(sample.point).lpNorm<Eigen::Infinity>());
      out.residual = (lhs - g * rhs).lpNorm<Eigen::Infinity>() / scale;
      // Angle between d phi(ker src) and ker dst, over a kernel basis of src on the tangent span.
      if (rhs.squaredNorm() > 0 && ad.norm() > 0) {
        Eigen::FullPivLU<Mat> lu(Mat(rhs.transpose()));
        Mat K = lu.kernel();
        for (int k = 0; k < K.cols(); ++k) {
          Vec w = JT * K.col(k);
          if (w.norm() == 0) continue;
          double s = std::min(1.0, std::abs(ad.dot(w)) / (ad.norm() * w.norm()));
          out.kernel_angle = std::max(out.kernel_angle, std::asin(s));
        }
      }
      report.min_factor = std::min(report.min_factor, g);
      report.max_factor = std::max(report.max_factor, g);
      if (worst < 0 || out.residual > report.max_residual) {
        report.max_residual = out.residual;
        worst = static_cast<int>(report.samples.size());
      }
      report.max_kernel_angle = std::max(report.max_kernel_angle, out.kernel_angle);
    } catch (const std::exception& e) {
      out.error = e.what();
      ++report.failed_evaluations;
    }
    report.samples.push_back(std::move(out));
  }
  if (worst >= 0 && report.max_residual > tol) report.counterexample = report.samples[worst].point;
  if (worst < 0) report.min_factor = report.max_factor = 0.0;
  return report;
}

std::vector<TangentSample> box_samples(int dim, int count, Rng& rng, double radius) {
  std::vector<TangentSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back({uniform_vec(rng, dim, -radius, radius), Mat::Identity(dim, dim)});
  return out;
}

SmoothMap psi_normalizer(int n) {
  if (n < 1) throw Error("invalid_argument", "n < 1");
  const int N = 2 * n + 1;
  SmoothMap m;
  m.name = "psi-normalizer";
  m.dim_in = m.dim_out = N;
  m.f = [n](const Vec& p) {
    Vec q = p;
    q[2 * n] = 2.0 * p[2 * n] + p.head(n).dot(p.segment(n, n));
    return q;
  };
  m.jac = [n, N](const Vec& p) {
    Mat J = Mat::Identity(N, N);
    J.block(2 * n, 0, 1, n) = p.segment(n, n).transpose();
    J.block(2 * n, n, 1, n) = p.head(n).transpose();
    J(2 * n, 2 * n) = 2.0;
    return J;
  };
  return m;
}

namespace {

Vec dilate(const Vec& p, int n, double t) {
  Vec q = p;
  q.head(2 * n) *= std::exp(t);
  q[2 * n] *= std::exp(2 * t);
  return q;
}

}  // namespace

SmoothMap dilation_map(int n, double t) {
  const int N = 2 * n + 1;
  SmoothMap m;
  m.name = "dilation";
  m.dim_in = m.dim_out = N;
  m.f = [n, t](const Vec& p) { return dilate(p, n, t); };
  m.jac = [n, t, N](const Vec&) {
    Vec d(N);
    d.head(2 * n).setConstant(std::exp(t));
    d[2 * n] = std::exp(2 * t);
    return Mat(d.asDiagonal());
  };
  return m;
}

SphereMap default_neck_rho(int n) {
  return [n](const Vec& s) {
    Vec out = s;
    const double z = s[2 * n];
    const double c = std::cos(2 * z), sn = std::sin(2 * z);
    for (int i = 0; i < n; ++i) {
      // conj(x + iy) * exp(-2iz)
      const double x = s[i], y = -s[n + i];
      out[i] = x * c + y * sn;
      out[n + i] = -x * sn + y * c;
    }
    return out;
  };
}

double neck_layer(const Vec& p, int n) {
  const double A = p.head(2 * n).squaredNorm();
  const double B = p[2 * n] * p[2 * n];
  if (A == 0.0 && B == 0.0) throw Error("invalid_argument", "neck layer undefined at the origin");
  const double w = 2.0 / (A + std::sqrt(A * A + 4.0 * B));
  double t = -0.5 * std::log(w);
  const double e2 = std::exp(-2 * t), e4 = e2 * e2;
  const double g = e2 * A + e4 * B - 1.0;
  const double dg = -2.0 * e2 * A - 4.0 * e4 * B;
  if (dg != 0.0) t -= g / dg;
  return t;
}

Vec neck_involution(const Vec& p, int n, const SphereMap& rho) {
  if (p.size() != 2 * n + 1) throw Error("dimension_mismatch", "point dimension is not 2n+1");
  if (p.norm() == 0.0) throw Error("invalid_argument", "neck involution undefined at the origin");
  const double t = neck_layer(p, n);
  Vec s = dilate(p, n, -t);
  Vec r = rho ? rho(s) : default_neck_rho(n)(s);
  return dilate(r, n, -t);
}

namespace {

Mat default_rho_jacobian(const Vec& s, int n) {
  const int N = 2 * n + 1;
  const double z = s[2 * n];
  const double c = std::cos(2 * z), sn = std::sin(2 * z);
  Mat J = Mat::Zero(N, N);
  for (int i = 0; i < n; ++i) {
    const double x = s[i], y = s[n + i];
    J(i, i) = c;
    J(i, n + i) = -sn;
    J(i, 2 * n) = -2 * x * sn - 2 * y * c;
    J(n + i, i) = -sn;
    J(n + i, n + i) = -c;
    J(n + i, 2 * n) = -2 * x * c + 2 * y * sn;
  }
  J(2 * n, 2 * n) = 1.0;
  return J;
}

}  // namespace

SmoothMap neck_map(int n, const SphereMap& rho) {
  const int N = 2 * n + 1;
  SmoothMap m;
  m.name = "neck-involution";
  m.dim_in = m.dim_out = N;
  m.f = [n, rho](const Vec& p) { return neck_involution(p, n, rho); };
  // Chain rule through s = delta^{-t(p)} p and Psi = delta^{-t}(rho(s)).
  m.jac = [n, N, rho](const Vec& p) {
    const double t = neck_layer(p, n);
    const double e2 = std::exp(-2 * t), e4 = e2 * e2;
    Vec gradA = Vec::Zero(N), gradB = Vec::Zero(N);
    gradA.head(2 * n) = 2.0 * p.head(2 * n);
    gradB[2 * n] = 2.0 * p[2 * n];
    const double A = p.head(2 * n).squaredNorm(), B = p[2 * n] * p[2 * n];
    Vec grad_t = (e2 * gradA + e4 * gradB) / (2 * e2 * A + 4 * e4 * B);
    Vec weights = Vec::Ones(N);
    weights[2 * n] = 2.0;
    Vec scale = (-t * weights).array().exp().matrix();
    Vec s = scale.cwiseProduct(p);
    Mat ds = Mat(scale.asDiagonal()) - weights.cwiseProduct(s) * grad_t.transpose();
    Vec r = rho ? rho(s) : default_neck_rho(n)(s);
    Mat Drho = rho ? fd_jacobian_richardson(rho, s) : default_rho_jacobian(s, n);
    return Mat(scale.asDiagonal() * Drho * ds - weights.cwiseProduct(scale.cwiseProduct(r)) * grad_t.transpose());
  };
  return m;
}

StandardPoint jet_to_standard(double u, const Vec& Q, const Vec& P) {
  if (Q.size() != P.size()) throw Error("dimension_mismatch", "Q and P differ in dimension");
  return {u, -P, Q};
}

SmoothMap jet_to_standard_map(int n) {
  const int N = 2 * n + 1;
  SmoothMap m;
  m.name = "jet-standard";
  m.dim_in = m.dim_out = N;
  m.f = [n](const Vec& p) {
    StandardPoint s = jet_to_standard(p[0], p.segment(1, n), p.segment(1 + n, n));
    Vec q(2 * n + 1);
    q << s.x, s.y, s.z;
    return q;
  };
  m.jac = [n, N](const Vec&) {
    Mat J = Mat::Zero(N, N);
    for (int i = 0; i < n; ++i) {
      J(i, 1 + n + i) = -1.0;
      J(n + i, 1 + i) = 1.0;
    }
    J(2 * n, 0) = 1.0;
    return J;
  };
  return m;
}

JetPoint sphere_jet_iso(const Vec& q, const Vec& p) {
  if (q.size() != p.size()) throw Error("dimension_mismatch", "q and p differ in dimension");
  if (std::abs(p.norm() - 1.0) > 1e-10) throw Error("invalid_argument", "|p| != 1");
  const double qp = q.dot(p);
  return {qp, p, q - qp * p};
}

SmoothMap sphere_jet_map(int n) {
  SmoothMap m;
  m.name = "sphere-jet";
  m.dim_in = 2 * n;
  m.dim_out = 2 * n + 1;
  m.f = [n](const Vec& s) {
    Vec q = s.head(n), p = s.tail(n);
    const double qp = q.dot(p);
    Vec out(2 * n + 1);
    out[0] = qp;
    out.segment(1, n) = p;
    out.segment(1 + n, n) = q - qp * p;
    return out;
  };
  m.jac = [n](const Vec& s) {
    Vec q = s.head(n), p = s.tail(n);
    const double qp = q.dot(p);
    Mat J = Mat::Zero(2 * n + 1, 2 * n);
    J.block(0, 0, 1, n) = p.transpose();
    J.block(0, n, 1, n) = q.transpose();
    J.block(1, n, n, n) = Mat::Identity(n, n);
    J.block(1 + n, 0, n, n) = Mat::Identity(n, n) - p * p.transpose();
    J.block(1 + n, n, n, n) = -p * q.transpose() - qp * Mat::Identity(n, n);
    return J;
  };
  return m;
}

std::vector<TangentSample> sphere_jet_samples(int n, int count, Rng& rng) {
  std::vector<TangentSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec q = gaussian_vec(rng, n);
    Vec p = gaussian_vec(rng, n).normalized();
    // Householder reflection sending e_1 to +-p; its other columns span p^perp.
    Vec v = p;
    v[0] += p[0] >= 0 ? 1.0 : -1.0;
    Mat H = Mat::Identity(n, n) - 2.0 * v * v.transpose() / v.squaredNorm();
    Mat T = Mat::Zero(2 * n, 2 * n - 1);
    T.block(0, 0, n, n) = Mat::Identity(n, n);
    if (n > 1) T.block(n, n, n, n - 1) = H.rightCols(n - 1);
    Vec point(2 * n);
    point << q, p;
    out.push_back({point, T});
  }
  return out;
}

std::pair<Vec, Vec> cotangent_lift(const SmoothMap& beta, const Vec& q, const Vec& p) {
  if (q.size() != p.size() || q.size() != beta.dim_in) throw Error("dimension_mismatch", "q, p and beta differ in dimension");
  Mat J = beta.jacobian(q);
  Eigen::FullPivLU<Mat> lu(Mat(J.transpose()));
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12)
    throw Error("singular_jacobian", "d beta(q) is not invertible");
  return {beta(q), lu.solve(p)};
}

SmoothMap cotangent_lift_map(const SmoothMap& beta) {
  const int m = beta.dim_in;
  SmoothMap out;
  out.name = "cotangent-lift";
  out.dim_in = out.dim_out = 2 * m;
  out.f = [beta, m](const Vec& s) {
    auto [q2, p2] = cotangent_lift(beta, s.head(m), s.tail(m));
    Vec r(2 * m);
    r << q2, p2;
    return r;
  };
  // Only the q' rows enter p' dq'; they are analytic, the p' rows use differences.
  out.jac = [beta, m, f = out.f](const Vec& s) {
    Mat J = fd_jacobian(f, s);
    J.topRows(m).setZero();
    J.block(0, 0, m, m) = beta.jacobian(s.head(m));
    return J;
  };
  return out;
}

SmoothMap random_triangular_diffeo(int m, Rng& rng, int degree, double scale) {
  std::uniform_real_distribution<double> diag(1.0, 2.0);
  PolynomialMap pm;
  for (int i = 0; i < m; ++i) {
    Polynomial comp = Polynomial::variable(m, i, diag(rng));
    if (i > 0) {
      Polynomial lower = Polynomial::random(i, degree, rng, scale);
      std::vector<Monomial> terms;
      for (const auto& t : lower.terms()) {
        std::vector<int> e(m, 0);
        std::copy(t.exponents.begin(), t.exponents.end(), e.begin());
        terms.push_back({t.coeff, e});
      }
      comp = comp + Polynomial(m, terms);
    }
    pm.components.push_back(comp);
  }
  SmoothMap beta;
  beta.name = "triangular-polynomial";
  beta.dim_in = beta.dim_out = m;
  beta.f = [pm](const Vec& q) { return pm(q); };
  beta.jac = [pm](const Vec& q) { return pm.jacobian(q); };
  return beta;
}

}  // namespace catlas
