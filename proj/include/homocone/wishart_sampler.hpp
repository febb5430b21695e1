#pragma once

// Wishart laws P(theta, R_s) on a homogeneous cone via a Bartlett-type
// triangular construction, plus empirical Laplace and moment diagnostics.
//
// Base case theta = -I: X = rho(T) E_eps with independent entries of T,
//   t_kk^2 ~ Gamma(sigma_k, 1),  block coordinates ~ N(0, 1/2),
// on the active columns (eps_k = 1). General theta: with -theta = rho*(S) I,
// X = rho(S^{-1}) X_0.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "homocone/power_riesz.hpp"

namespace homocone {

/// Which integer offsets the Gamma shapes subtract from s.
enum class BartlettConvention {
  /// sigma_k = s_k - p_k/2,  p_k = sum_{i<k} eps_i dim V_ki.
  RowCounts,
  /// sigma_k = s_k - q_k/2,  q_k = sum_{l>k} eps_l dim V_lk.
  ColumnCounts,
};

struct SamplerOptions {
  BartlettConvention convention = BartlettConvention::RowCounts;
  /// Worker threads; results do not depend on this.
  int threads = 1;
  Tolerances tol{};
};

class SampleBatch {
 public:
  SampleBatch(ConePtr structure, RieszParameter s, StructuredMatrix theta, std::uint64_t seed,
              std::size_t count, std::vector<int> eps);

  const ConePtr& structure() const { return structure_; }
  const RieszParameter& s() const { return s_; }
  const StructuredMatrix& theta() const { return theta_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t count() const { return count_; }
  /// Active columns of the construction; all ones for regular batches.
  const std::vector<int>& eps() const { return eps_; }

  /// Column-major storage: coordinate j of all samples is contiguous.
  std::span<const double> column(int j) const;
  std::span<double> column(int j);
  const std::vector<double>& data() const { return data_; }
  double value(std::size_t i, int j) const { return data_[static_cast<std::size_t>(j) * count_ + i]; }
  StructuredMatrix sample(std::size_t i) const;

 private:
  ConePtr structure_;
  RieszParameter s_;
  StructuredMatrix theta_;
  std::uint64_t seed_;
  std::size_t count_;
  std::vector<int> eps_;
  std::vector<double> data_;
};

/// Gamma shapes for the active columns of eps (0 for inactive ones).
/// Throws NotInGindikinSet when an active shape is not positive.
std::vector<double> bartlett_shapes(const ConeStructure& c, std::span<const double> s,
                                    std::span<const int> eps, BartlettConvention convention);

/// Draws n samples of P(theta, R_s). Requires s in the regular stratum and
/// -theta in the dual cone.
SampleBatch sample_wishart(const RieszParameter& s, const StructuredMatrix& theta, std::size_t n,
                           std::uint64_t seed, const SamplerOptions& opts = {});

/// Samples of the theta = -I law for s in a singular stratum Xi(eps).
SampleBatch sample_singular(const ConePtr& c, const RieszParameter& s, std::span<const int> eps,
                            std::size_t n, std::uint64_t seed, const SamplerOptions& opts = {});

struct LaplaceEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  /// Set when some <eta, X_i> > 0 and that single term carries over 10% of the sum.
  bool dominated = false;
};

/// Batch of g X_i (for pushforward checks); metadata is copied from `b`.
SampleBatch map_samples(const SampleBatch& b, const LinearMap& g);

/// Mean and standard error of exp(<eta, X_i>).
LaplaceEstimate empirical_laplace(const SampleBatch& b, const StructuredMatrix& eta);

/// <eta, X_i> for every sample.
std::vector<double> projections(const SampleBatch& b, const StructuredMatrix& eta);

struct Moments {
  StructuredMatrix mean;
  /// Coordinatewise covariance, dim x dim, divisor n - 1.
  Matrix covariance;
};

Moments empirical_moments(const SampleBatch& b);

/// Header d1..dr,b_l_k_j then one row per sample, shortest round-trip decimals.
void write_csv(const SampleBatch& b, std::ostream& out);
nlohmann::json sidecar_json(const SampleBatch& b);

}  // namespace homocone
