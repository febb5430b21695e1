#pragma once

// Generalized power functions on the dual cone, the Gindikin-Wallach set of
// admissible Riesz parameters, sign matrices E_eps and the orbit-flip
// construction T(v) that shows mixed-sign dual orbits are not convex.

#include <optional>
#include <span>
#include <vector>

#include "homocone/triangular_group.hpp"

namespace homocone {

/// Entries in {-1, 0, +1}, one per block.
struct SignVector {
  std::vector<int> eps;

  SignVector() = default;
  explicit SignVector(std::vector<int> e);
  int size() const { return static_cast<int>(eps.size()); }
  int operator[](int k) const { return eps[static_cast<std::size_t>(k)]; }
  bool operator==(const SignVector&) const = default;
};

/// s in R^r together with its Gindikin-Wallach stratum, when it has one.
struct RieszParameter {
  std::vector<double> s;
  /// eps in {0,1}^r with s in Xi(eps).
  std::optional<std::vector<int>> stratum;
  /// p_k(stratum), empty when unclassified.
  std::vector<double> p;

  /// Classifies s against the strata of `c`.
  static RieszParameter classify(const ConeStructure& c, std::vector<double> s,
                                 const Tolerances& tol = default_tolerances());
  bool in_gindikin_set() const { return stratum.has_value(); }
  /// Stratum (1,...,1): R_s is absolutely continuous on the cone.
  bool regular() const;
  /// (s_r, ..., s_1).
  std::vector<double> reversed() const;
};

StructuredMatrix sign_matrix(const ConePtr& c, const SignVector& eps);

/// p_k(eps) = sum_{i<k} eps_i dim V_ki, for eps in {0,1}^r.
std::vector<double> p_vector(const ConeStructure& c, std::span<const int> eps);

/// The unique eps in {0,1}^r with s in Xi(eps), or nullopt.
std::optional<std::vector<int>> gindikin_membership(const ConeStructure& c, std::span<const double> s,
                                                    const Tolerances& tol = default_tolerances());

/// Delta*_s(xi) = chi_{s*}(T) where xi = rho*(T) I.
double dual_power(std::span<const double> s, const StructuredMatrix& xi,
                  const Tolerances& tol = default_tolerances());
double log_dual_power(std::span<const double> s, const StructuredMatrix& xi,
                      const Tolerances& tol = default_tolerances());

/// L_{R_s}(-theta) = Delta*_{-s*}(theta) for theta in the dual cone.
/// Throws NotInGindikinSet or NotInDualCone.
double riesz_laplace(const RieszParameter& s, const StructuredMatrix& theta,
                     const Tolerances& tol = default_tolerances());
double log_riesz_laplace(const RieszParameter& s, const StructuredMatrix& theta,
                         const Tolerances& tol = default_tolerances());

struct SupportFlags {
  bool hyperplane_concentrated = false;
  /// 0-based k with s_k = 0; every support point has x_kk = 0.
  std::vector<int> zero_coordinates;
};

SupportFlags support_flags(const ConeStructure& c, const RieszParameter& s,
                           const Tolerances& tol = default_tolerances());

/// T(v): unit diagonal, block (l,k) equal to v (coefficients in the V_lk
/// basis), everything else zero. Throws EmptyBlock when dim V_lk = 0.
TriangularElement flip_element(const ConePtr& c, int k, int l, const Vector& v);

/// Signs after the flip: eps'_k = eps_l, all other entries unchanged.
SignVector flipped_signs(const SignVector& eps, int k, int l);

/// 1/2 (rho*(T(v)) E_eps + rho*(T(-v)) E_eps). Requires opposite nonzero
/// signs at k and l and (v|v) = 2; throws PreconditionViolation otherwise.
StructuredMatrix flip_midpoint(const ConePtr& c, const SignVector& eps, int k, int l,
                               const Vector& v, const Tolerances& tol = default_tolerances());

/// Primal counterpart 1/2 (rho(T(v)) x + rho(T(-v)) x).
StructuredMatrix flip_primal_average(const StructuredMatrix& x, int k, int l, const Vector& v,
                                     const Tolerances& tol = default_tolerances());

/// Pairs (k,l), k < l, with dim V_lk > 0 and eps_k = -eps_l.
std::vector<std::pair<int, int>> bridging_pairs(const ConeStructure& c, const SignVector& eps);

}  // namespace homocone
