#include "catlas/ode.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>

namespace catlas {

namespace odeint = boost::numeric::odeint;

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& p, double h) {
  const double step = h * (1.0 + p.norm());
  Vec f0 = f(p);
  Mat J(f0.size(), p.size());
  Vec q = p;
  for (int k = 0; k < p.size(); ++k) {
    q[k] = p[k] + step;
    Vec fp = f(q);
    q[k] = p[k] - step;
    Vec fm = f(q);
    q[k] = p[k];
    J.col(k) = (fp - fm) / (2.0 * step);
  }
  return J;
}

Mat fd_jacobian_richardson(const std::function<Vec(const Vec&)>& f, const Vec& p, double h) {
  return (4.0 * fd_jacobian(f, p, h / 2) - fd_jacobian(f, p, h)) / 3.0;
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& p, double h) {
  const double step = h * (1.0 + p.norm());
  Vec g(p.size());
  Vec q = p;
  for (int k = 0; k < p.size(); ++k) {
    q[k] = p[k] + step;
    double fp = f(q);
    q[k] = p[k] - step;
    double fm = f(q);
    q[k] = p[k];
    g[k] = (fp - fm) / (2.0 * step);
  }
  return g;
}

namespace {

using State = std::vector<double>;

struct System {
  const Rhs& f;
  double sign;
  void operator()(const State& x, State& dx, double) const {
    Eigen::Map<const Vec> xm(x.data(), static_cast<Eigen::Index>(x.size()));
    Vec v = f(Vec(xm));
    dx.resize(x.size());
    for (size_t i = 0; i < x.size(); ++i) dx[i] = sign * v[static_cast<Eigen::Index>(i)];
  }
};

struct Stop {};

void check_state(const State& x, double max_norm) {
  double n2 = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw Error("nan", "non-finite state during integration");
    n2 += v * v;
  }
  if (std::sqrt(n2) > max_norm) throw Error("step_underflow", "solution blew up during integration");
}

Vec to_vec(const State& x) {
  return Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
}

}  // namespace

Trajectory integrate_recorded(const Rhs& f, const Vec& x0, double t, const OdeParams& params,
                              const StepObserver& observer) {
  Trajectory out;
  State x(x0.data(), x0.data() + x0.size());
  out.t.push_back(0.0);
  out.x.push_back(x0);
  if (t == 0.0) return out;
  // Backward time is integrated as forward time of the negated field.
  const double sign = t > 0 ? 1.0 : -1.0;
  System sys{f, sign};
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(params.abs_tol, params.rel_tol);
  try {
    odeint::integrate_adaptive(stepper, sys, x, 0.0, std::abs(t), params.initial_step,
                               [&](const State& s, double tau) {
                                 check_state(s, params.max_norm);
                                 if (tau == 0.0) return;
                                 out.t.push_back(sign * tau);
                                 out.x.push_back(to_vec(s));
                                 if (observer && !observer(sign * tau, out.x.back())) throw Stop{};
                               });
  } catch (const Stop&) {
  } catch (const odeint::step_adjustment_error&) {
    throw Error("step_underflow", "step size control failed");
  } catch (const odeint::no_progress_error&) {
    throw Error("step_underflow", "integrator made no progress");
  }
  return out;
}

Vec integrate(const Rhs& f, const Vec& x0, double t, const OdeParams& params) {
  if (t == 0.0) return x0;
  State x(x0.data(), x0.data() + x0.size());
  const double sign = t > 0 ? 1.0 : -1.0;
  System sys{f, sign};
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(params.abs_tol, params.rel_tol);
  try {
    odeint::integrate_adaptive(stepper, sys, x, 0.0, std::abs(t), params.initial_step,
                               [&](const State& s, double) { check_state(s, params.max_norm); });
  } catch (const odeint::step_adjustment_error&) {
    throw Error("step_underflow", "step size control failed");
  } catch (const odeint::no_progress_error&) {
    throw Error("step_underflow", "integrator made no progress");
  }
  return to_vec(x);
}

Vec rk4(const Rhs& f, const Vec& x0, double t, int steps) {
  const double h = t / steps;
  Vec x = x0;
  for (int i = 0; i < steps; ++i) {
    Vec k1 = f(x);
    Vec k2 = f(x + 0.5 * h * k1);
    Vec k3 = f(x + 0.5 * h * k2);
    Vec k4 = f(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace catlas
