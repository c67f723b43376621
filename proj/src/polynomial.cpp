#include "catlas/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace catlas {

Polynomial::Polynomial(int nvars, std::vector<Monomial> terms) : nvars_(nvars), terms_(std::move(terms)) {
  for (const auto& t : terms_)
    if (static_cast<int>(t.exponents.size()) != nvars_)
      throw Error("dimension_mismatch", "monomial exponent count differs from variable count");
  normalize();
}

Polynomial Polynomial::constant(int nvars, double c) {
  return Polynomial(nvars, {Monomial{c, std::vector<int>(nvars, 0)}});
}

Polynomial Polynomial::variable(int nvars, int index, double coeff) {
  std::vector<int> e(nvars, 0);
  e[index] = 1;
  return Polynomial(nvars, {Monomial{coeff, e}});
}

Polynomial Polynomial::random(int nvars, int degree, Rng& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Monomial> terms;
  std::vector<int> e(nvars, 0);
  // Enumerate all exponent vectors with total degree <= degree.
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == nvars) {
      terms.push_back({u(rng), e});
      return;
    }
    for (int a = 0; a <= left; ++a) {
      e[k] = a;
      rec(k + 1, left - a);
    }
    e[k] = 0;
  };
  rec(0, degree);
  return Polynomial(nvars, std::move(terms));
}

void Polynomial::normalize() {
  std::map<std::vector<int>, double> acc;
  for (const auto& t : terms_) acc[t.exponents] += t.coeff;
  terms_.clear();
  for (auto& [e, c] : acc)
    if (c != 0.0) terms_.push_back({c, e});
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int a : t.exponents) s += a;
    d = std::max(d, s);
  }
  return d;
}

double Polynomial::operator()(const Vec& p) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff;
    for (int k = 0; k < nvars_; ++k)
      for (int a = 0; a < t.exponents[k]; ++a) m *= p[k];
    sum += m;
  }
  return sum;
}

Polynomial Polynomial::derivative(int index) const {
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    if (t.exponents[index] == 0) continue;
    Monomial m = t;
    m.coeff *= t.exponents[index];
    m.exponents[index] -= 1;
    out.push_back(m);
  }
  return Polynomial(nvars_, std::move(out));
}

Vec Polynomial::gradient(const Vec& p) const {
  Vec g = Vec::Zero(nvars_);
  for (const auto& t : terms_) {
    for (int k = 0; k < nvars_; ++k) {
      if (t.exponents[k] == 0) continue;
      double m = t.coeff * t.exponents[k];
      for (int j = 0; j < nvars_; ++j) {
        int a = t.exponents[j] - (j == k ? 1 : 0);
        for (int r = 0; r < a; ++r) m *= p[j];
      }
      g[k] += m;
    }
  }
  return g;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Monomial> t = terms_;
  t.insert(t.end(), o.terms_.begin(), o.terms_.end());
  return Polynomial(std::max(nvars_, o.nvars_), std::move(t));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  std::vector<Monomial> out;
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      Monomial m{a.coeff * b.coeff, a.exponents};
      for (int k = 0; k < nvars_; ++k) m.exponents[k] += b.exponents[k];
      out.push_back(m);
    }
  return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator*(double c) const {
  std::vector<Monomial> t = terms_;
  for (auto& m : t) m.coeff *= c;
  return Polynomial(nvars_, std::move(t));
}

Vec PolynomialMap::operator()(const Vec& p) const {
  Vec v(static_cast<Eigen::Index>(components.size()));
  for (size_t i = 0; i < components.size(); ++i) v[static_cast<Eigen::Index>(i)] = components[i](p);
  return v;
}

Mat PolynomialMap::jacobian(const Vec& p) const {
  Mat J(static_cast<Eigen::Index>(components.size()), p.size());
  for (size_t i = 0; i < components.size(); ++i)
    J.row(static_cast<Eigen::Index>(i)) = components[i].gradient(p).transpose();
  return J;
}

}  // namespace catlas
