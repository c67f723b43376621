#pragma once

#include "catlas/core.hpp"

#include <vector>

namespace catlas {

struct Monomial {
  double coeff = 0.0;
  std::vector<int> exponents;
};

// Sparse multivariate polynomial in N variables.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}
  Polynomial(int nvars, std::vector<Monomial> terms);

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int index, double coeff = 1.0);
  // Random polynomial with total degree <= degree and coefficients uniform in [-scale, scale].
  static Polynomial random(int nvars, int degree, Rng& rng, double scale = 1.0);

  int nvars() const { return nvars_; }
  int degree() const;
  const std::vector<Monomial>& terms() const { return terms_; }

  double operator()(const Vec& p) const;
  Vec gradient(const Vec& p) const;
  Polynomial derivative(int index) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double c) const;

 private:
  void normalize();
  int nvars_ = 0;
  std::vector<Monomial> terms_;
};

// A vector of polynomials: a polynomial map or polynomial vector field.
struct PolynomialMap {
  std::vector<Polynomial> components;
  Vec operator()(const Vec& p) const;
  Mat jacobian(const Vec& p) const;
};

}  // namespace catlas
