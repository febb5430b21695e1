#include "homocone/power_riesz.hpp"

#include <cmath>

#include "homocone/errors.hpp"

namespace homocone {

SignVector::SignVector(std::vector<int> e) : eps(std::move(e)) {
  for (int v : eps) {
    if (v < -1 || v > 1) throw InvalidInput("sign vector entries must be -1, 0 or 1");
  }
}

RieszParameter RieszParameter::classify(const ConeStructure& c, std::vector<double> s,
                                        const Tolerances& tol) {
  if (static_cast<int>(s.size()) != c.rank()) {
    throw InvalidInput("Riesz parameter needs " + std::to_string(c.rank()) + " entries");
  }
  RieszParameter out;
  out.stratum = gindikin_membership(c, s, tol);
  if (out.stratum) out.p = p_vector(c, *out.stratum);
  out.s = std::move(s);
  return out;
}

bool RieszParameter::regular() const {
  if (!stratum) return false;
  for (int e : *stratum)
    if (e != 1) return false;
  return true;
}

std::vector<double> RieszParameter::reversed() const { return {s.rbegin(), s.rend()}; }

StructuredMatrix sign_matrix(const ConePtr& c, const SignVector& eps) {
  if (eps.size() != c->rank()) throw InvalidInput("sign vector length must equal the rank");
  std::vector<double> d(eps.eps.begin(), eps.eps.end());
  return StructuredMatrix::diagonal(c, d);
}

std::vector<double> p_vector(const ConeStructure& c, std::span<const int> eps) {
  const int r = c.rank();
  if (static_cast<int>(eps.size()) != r) throw InvalidInput("stratum length must equal the rank");
  std::vector<double> p(static_cast<std::size_t>(r), 0.0);
  for (int k = 0; k < r; ++k) {
    for (int i = 0; i < k; ++i) {
      p[static_cast<std::size_t>(k)] += eps[static_cast<std::size_t>(i)] * c.block_dim(k, i);
    }
  }
  return p;
}

std::optional<std::vector<int>> gindikin_membership(const ConeStructure& c, std::span<const double> s,
                                                    const Tolerances& tol) {
  const int r = c.rank();
  if (static_cast<int>(s.size()) != r) throw InvalidInput("Riesz parameter length must equal the rank");
  std::optional<std::vector<int>> found;
  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    std::vector<int> eps(static_cast<std::size_t>(r));
    for (int k = 0; k < r; ++k) eps[static_cast<std::size_t>(k)] = (mask >> k) & 1u;
    const auto p = p_vector(c, eps);
    bool ok = true;
    for (int k = 0; k < r && ok; ++k) {
      const double half = 0.5 * p[static_cast<std::size_t>(k)];
      const double sk = s[static_cast<std::size_t>(k)];
      // Strict inequality is taken beyond the equality band so strata stay disjoint.
      ok = eps[static_cast<std::size_t>(k)] == 1 ? sk > half + tol.gindikin_equality
                                                 : std::abs(sk - half) <= tol.gindikin_equality;
    }
    if (ok) {
      found = std::move(eps);
      break;
    }
  }
  return found;
}

double log_dual_power(std::span<const double> s, const StructuredMatrix& xi, const Tolerances& tol) {
  const auto dec = dual_decompose(xi, tol);
  const std::vector<double> rev(s.rbegin(), s.rend());
  return log_character(rev, dec.factor);
}

double dual_power(std::span<const double> s, const StructuredMatrix& xi, const Tolerances& tol) {
  return std::exp(log_dual_power(s, xi, tol));
}

double log_riesz_laplace(const RieszParameter& s, const StructuredMatrix& theta,
                         const Tolerances& tol) {
  if (!s.in_gindikin_set()) throw NotInGindikinSet("s is outside the Gindikin-Wallach set");
  // Delta*_{-s*}: reversing -s* gives back -s on the characters.
  std::vector<double> minus_rev = s.reversed();
  for (auto& v : minus_rev) v = -v;
  return log_dual_power(minus_rev, theta, tol);
}

double riesz_laplace(const RieszParameter& s, const StructuredMatrix& theta, const Tolerances& tol) {
  return std::exp(log_riesz_laplace(s, theta, tol));
}

SupportFlags support_flags(const ConeStructure& c, const RieszParameter& s, const Tolerances& tol) {
  if (!gindikin_membership(c, s.s, tol)) throw NotInGindikinSet("s is outside the Gindikin-Wallach set");
  SupportFlags f;
  for (int k = 0; k < c.rank(); ++k) {
    if (std::abs(s.s[static_cast<std::size_t>(k)]) <= tol.gindikin_equality) f.zero_coordinates.push_back(k);
  }
  f.hyperplane_concentrated = !f.zero_coordinates.empty();
  return f;
}

TriangularElement flip_element(const ConePtr& c, int k, int l, const Vector& v) {
  if (!(0 <= k && k < l && l < c->rank())) throw InvalidInput("flip needs 1 <= k < l <= r");
  const int dim = c->block_dim(l, k);
  if (dim == 0) {
    throw EmptyBlock("V_" + std::to_string(l + 1) + std::to_string(k + 1) + " is zero");
  }
  if (v.size() != dim) throw InvalidInput("flip vector must have dim V_lk coefficients");
  Vector p = Vector::Zero(c->dim());
  p.head(c->rank()).setOnes();
  p.segment(c->block_offset(l, k), dim) = v;
  return TriangularElement(c, std::move(p));
}

SignVector flipped_signs(const SignVector& eps, int k, int l) {
  SignVector out = eps;
  out.eps[static_cast<std::size_t>(k)] = eps[l];
  return out;
}

StructuredMatrix flip_midpoint(const ConePtr& c, const SignVector& eps, int k, int l,
                               const Vector& v, const Tolerances& tol) {
  if (eps.size() != c->rank()) throw PreconditionViolation("sign vector length must equal the rank");
  if (!(0 <= k && k < l && l < c->rank())) throw PreconditionViolation("flip needs 1 <= k < l <= r");
  if (eps[k] == 0 || eps[k] != -eps[l]) {
    throw PreconditionViolation("flip needs opposite nonzero signs at k and l");
  }
  if (v.size() != c->block_dim(l, k)) {
    throw PreconditionViolation("flip vector must have dim V_lk coefficients");
  }
  // Orthonormal coefficients: (v|v) is the sum of squares.
  if (std::abs(v.squaredNorm() - 2.0) > tol.flip_norm) throw PreconditionViolation("flip needs (v|v) = 2");
  const auto e = sign_matrix(c, eps);
  const auto plus = rho_star_apply(flip_element(c, k, l, v), e, tol);
  const auto minus = rho_star_apply(flip_element(c, k, l, -v), e, tol);
  return 0.5 * (plus + minus);
}

StructuredMatrix flip_primal_average(const StructuredMatrix& x, int k, int l, const Vector& v,
                                     const Tolerances& tol) {
  const auto& c = x.structure();
  const auto plus = rho_apply(flip_element(c, k, l, v), x, tol);
  const auto minus = rho_apply(flip_element(c, k, l, -v), x, tol);
  return 0.5 * (plus + minus);
}

std::vector<std::pair<int, int>> bridging_pairs(const ConeStructure& c, const SignVector& eps) {
  std::vector<std::pair<int, int>> out;
  for (int l = 1; l < c.rank(); ++l) {
    for (int k = 0; k < l; ++k) {
      if (c.block_dim(l, k) > 0 && eps[k] != 0 && eps[k] == -eps[l]) out.emplace_back(k, l);
    }
  }
  return out;
}

}  // namespace homocone
