#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace catlas {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr int kSchemaVersion = 1;

// Error with a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

using Rng = std::mt19937_64;

inline Vec uniform_vec(Rng& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline Vec gaussian_vec(Rng& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

// Central-difference Jacobian of f at p with step h * (1 + |p|).
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& p, double h = 1e-5);

// Richardson-extrapolated central differences, O(h^4).
Mat fd_jacobian_richardson(const std::function<Vec(const Vec&)>& f, const Vec& p, double h = 1e-3);

// Central-difference gradient of a scalar function.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& p, double h = 1e-5);

}  // namespace catlas
