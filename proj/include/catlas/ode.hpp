#pragma once

#include "catlas/core.hpp"

#include <vector>

namespace catlas {

using Rhs = std::function<Vec(const Vec&)>;

struct OdeParams {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double initial_step = 1e-3;
  double max_norm = 1e12;  // blow-up guard
};

// Adaptive Dormand-Prince integration of x' = f(x) from time 0 to t (t may be negative).
// Throws Error("step_underflow") on blow-up and Error("nan") on non-finite state.
Vec integrate(const Rhs& f, const Vec& x0, double t, const OdeParams& params = {});

// Same integrator, recording every accepted step (times and states, starting with x0).
struct Trajectory {
  std::vector<double> t;
  std::vector<Vec> x;
};

// Observer returns false to stop early; the trajectory then ends at the last accepted step.
using StepObserver = std::function<bool(double, const Vec&)>;
Trajectory integrate_recorded(const Rhs& f, const Vec& x0, double t, const OdeParams& params,
                              const StepObserver& observer = {});

// Fixed-step classical RK4.
Vec rk4(const Rhs& f, const Vec& x0, double t, int steps);

}  // namespace catlas
