#pragma once

// Natural exponential families generated by exponentially tilted Riesz
// measures, mu(dx) = exp(a0 - <theta0, x>) R_s(+-dx), and the numerical audit of
// their characterization by invariance under the triangular group.
//
// The dual space is identified with Z_V through the standard inner product.
// Invariance constants follow the Laplace form
//   L_{mu0}(g* theta) = c_g^{-1} L_{mu0}(theta),
// which for g = rho(T) gives c_g = chi_s(T).

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homocone/wishart_sampler.hpp"

namespace homocone {

struct NEFDescriptor {
  ConePtr structure;
  RieszParameter s;
  StructuredMatrix theta0;
  /// Log base constant, log L_{mu0}(-I) (or at +I when reflected).
  double a0 = 0.0;
  /// True for R_s(-dx).
  bool reflected = false;

  /// Throws NotInGindikinSet unless s is in the Gindikin-Wallach set with
  /// every s_k > 0.
  static NEFDescriptor make(std::vector<double> s, StructuredMatrix theta0, double a0 = 0.0,
                            bool reflected = false, const Tolerances& tol = default_tolerances());

  /// Orientation of the domain: -1 when Theta(mu0) = -Omega*, +1 when reflected.
  double side() const { return reflected ? 1.0 : -1.0; }
};

/// L_mu(theta). Throws OutOfDomain outside Theta(mu).
double laplace(const NEFDescriptor& d, const StructuredMatrix& theta,
               const Tolerances& tol = default_tolerances());
double cumulant(const NEFDescriptor& d, const StructuredMatrix& theta,
                const Tolerances& tol = default_tolerances());
bool in_domain(const NEFDescriptor& d, const StructuredMatrix& theta,
               const Tolerances& tol = default_tolerances());

/// Gradient of the cumulant by central differences, identified with Z_V.
StructuredMatrix mean(const NEFDescriptor& d, const StructuredMatrix& theta,
                      const Tolerances& tol = default_tolerances());
/// Same with an explicit absolute step.
StructuredMatrix mean_with_step(const NEFDescriptor& d, const StructuredMatrix& theta, double h,
                                const Tolerances& tol = default_tolerances());

/// Laplace transform of the detilted measure mu0 = exp(<theta0,x>) mu.
double laplace_mu0(const NEFDescriptor& d, const StructuredMatrix& theta,
                   const Tolerances& tol = default_tolerances());

struct InvarianceCheck {
  double lhs = 0.0;  ///< L_{mu0}(rho*(T) theta)
  double rhs = 0.0;  ///< chi_{-s}(T) L_{mu0}(theta)
  double c_g = 0.0;  ///< chi_s(T)
};

InvarianceCheck invariance_check(const NEFDescriptor& d, const TriangularElement& t,
                                 const StructuredMatrix& theta,
                                 const Tolerances& tol = default_tolerances());

/// c_g measured from two Laplace evaluations, L(theta) / L(rho*(T) theta).
double measured_invariance_constant(const NEFDescriptor& d, const TriangularElement& t,
                                    const StructuredMatrix& theta,
                                    const Tolerances& tol = default_tolerances());

struct CocycleRecord {
  LinearMap g;
  StructuredMatrix a;
  double b = 0.0;
  double c = 0.0;
};

/// Record for g = rho(T) with the closed-form character: b = -log chi_s(T).
CocycleRecord cocycle_from_descriptor(const NEFDescriptor& d, const TriangularElement& t,
                                      const Tolerances& tol = default_tolerances());
/// Record for a general cone-preserving g; b comes from one Laplace probe.
CocycleRecord cocycle_from_descriptor(const NEFDescriptor& d, const LinearMap& g,
                                      const Tolerances& tol = default_tolerances());

struct CocycleLawReport {
  double a_error = 0.0;  ///< |a(gg') - (g*)^{-1} a(g') - a(g)|
  double b_error = 0.0;  ///< |b(gg') - b(g) - b(g')|
  bool pass = false;
};

CocycleLawReport cocycle_laws(const CocycleRecord& g, const CocycleRecord& g_prime,
                              const CocycleRecord& product,
                              const Tolerances& tol = default_tolerances());

/// theta0 = c/(c-1) a(c Id). Throws DegenerateScale when |c - 1| < 1e-12.
StructuredMatrix extract_theta0(const StructuredMatrix& a_of_scalar, double c);

struct CharacterProbe {
  int block = 0;    ///< 0-based j of the probe e_j(t)
  double t = 0.0;   ///< t_jj = t, all other t_kk = 1
  double c_g = 0.0;
};

/// Diagonal probes e_j(t), t in {2, 3}, with constants measured from d.
std::vector<CharacterProbe> character_probes(const NEFDescriptor& d,
                                             const Tolerances& tol = default_tolerances());

/// Inverts log c_g = 2 s_j log t. Throws InconsistentCharacter when two probes
/// of the same block disagree.
RieszParameter recover_parameter(const ConeStructure& c, const std::vector<CharacterProbe>& probes,
                                 const Tolerances& tol = default_tolerances());

struct AuditStep {
  std::string name;
  bool pass = false;
  nlohmann::json metrics;
};

struct AuditReport {
  std::vector<AuditStep> steps;
  bool pass() const;
  nlohmann::json to_json(const NEFDescriptor& d, std::uint64_t seed, std::size_t n) const;
};

struct AuditOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  int threads = 1;
  Tolerances tol{};
};

/// End-to-end check of the invariance characterization for d.
AuditReport characterization_audit(const NEFDescriptor& d, const AuditOptions& opts = {});

}  // namespace homocone
