#pragma once

// Shared fixtures for the unit tests: random group elements drawn with a
// generator independent of the library's own, plus small statistical helpers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "homocone/cone_zoo.hpp"
#include "homocone/triangular_group.hpp"

namespace testing_support {

using namespace homocone;

inline std::mt19937_64& engine() {
  static std::mt19937_64 e(20240611);
  return e;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine()); }
inline double gauss() { return std::normal_distribution<double>(0.0, 1.0)(engine()); }

inline TriangularElement random_element(const ConePtr& c, double spread = 0.5) {
  Vector p(c->dim());
  for (int k = 0; k < c->rank(); ++k) p[k] = std::exp(uniform(-spread, spread));
  for (int j = c->rank(); j < c->dim(); ++j) p[j] = spread * gauss();
  return TriangularElement(c, std::move(p));
}

inline StructuredMatrix random_vector(const ConePtr& c, double scale = 1.0) {
  Vector v(c->dim());
  for (int j = 0; j < c->dim(); ++j) v[j] = scale * gauss();
  return StructuredMatrix(c, std::move(v));
}

/// Interior of the cone: rho(T) I.
inline StructuredMatrix random_primal(const ConePtr& c, double spread = 0.5) {
  return rho_apply(random_element(c, spread), StructuredMatrix::identity(c));
}

/// Interior of the dual cone: rho*(T) I.
inline StructuredMatrix random_dual(const ConePtr& c, double spread = 0.5) {
  return rho_star_apply(random_element(c, spread), StructuredMatrix::identity(c));
}

inline std::vector<ConePtr> zoo() {
  std::vector<ConePtr> out;
  for (const auto& n : zoo_names()) out.push_back(zoo_cone(n));
  return out;
}

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic 1% critical value of the KS statistic.
inline double ks_critical(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

inline double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testing_support
