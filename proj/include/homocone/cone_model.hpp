#pragma once

// Structured symmetric-matrix realization Z_V of a homogeneous cone.
//
// A cone is described by a block partition N = n_1 + ... + n_r and, for each
// pair k < l, a subspace V_lk of n_l x n_k real matrices. Elements of Z_V are
// symmetric matrices whose diagonal blocks are scalar multiples of identity
// and whose (l,k) blocks lie in V_lk. Coordinates are ordered with the r
// diagonal scalars first and then the block coefficients sorted by (l, k, j).
//
// Indices are 0-based in the API; file formats and printed names are 1-based.

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "homocone/config.hpp"

namespace homocone {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class BlockPartition {
 public:
  explicit BlockPartition(std::vector<int> sizes);

  int rank() const { return static_cast<int>(sizes_.size()); }
  int size(int k) const { return sizes_[k]; }
  /// N = n_1 + ... + n_r.
  int total() const { return total_; }
  /// First row of block k in the N x N embedding.
  int row_offset(int k) const { return offsets_[k]; }
  const std::vector<int>& sizes() const { return sizes_; }

  bool operator==(const BlockPartition&) const = default;

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int total_ = 0;
};

/// Basis of one subspace V_lk (l > k) as supplied by the user.
struct BlockSpace {
  int l = 0;
  int k = 0;
  std::vector<Matrix> basis;
};

class ConeStructure;
using ConePtr = std::shared_ptr<const ConeStructure>;

class ConeStructure {
 public:
  /// Builds the structure, orthonormalizing every basis with respect to
  /// (A|B) = tr(AB^T)/n_l. Bases already orthonormal to round-off are kept
  /// verbatim. Throws InvalidInput on shape errors or rank-deficient bases.
  /// The (V1)-(V3) axioms are not enforced here; see validate_axioms.
  static ConePtr create(std::string name, BlockPartition partition,
                        std::vector<BlockSpace> blocks,
                        const Tolerances& tol = default_tolerances());

  const std::string& name() const { return name_; }
  const BlockPartition& partition() const { return partition_; }
  int rank() const { return partition_.rank(); }
  int matrix_size() const { return partition_.total(); }
  /// dim Z_V = r + sum of dim V_lk.
  int dim() const { return dim_; }

  int block_dim(int l, int k) const { return static_cast<int>(basis(l, k).size()); }
  const std::vector<Matrix>& basis(int l, int k) const { return bases_[pair_index(l, k)]; }
  /// Coordinate index of the first coefficient of V_lk.
  int block_offset(int l, int k) const { return offsets_[pair_index(l, k)]; }

  /// Weight of coordinate j in the standard inner product: 1 on diagonal
  /// scalars, 2 on block coefficients.
  double weight(int j) const { return j < rank() ? 1.0 : 2.0; }
  /// d1..dr, then b_l_k_j (1-based).
  std::vector<std::string> coordinate_names() const;

  /// Same partition and identical bases.
  bool same_as(const ConeStructure& other) const;

 private:
  ConeStructure(std::string name, BlockPartition partition);
  static int pair_index(int l, int k) { return l * (l - 1) / 2 + k; }

  std::string name_;
  BlockPartition partition_;
  std::vector<std::vector<Matrix>> bases_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

/// An element of Z_V in block coordinates.
class StructuredMatrix {
 public:
  StructuredMatrix(ConePtr structure, Vector coords);

  static StructuredMatrix zero(ConePtr structure);
  static StructuredMatrix identity(ConePtr structure);
  static StructuredMatrix diagonal(ConePtr structure, const std::vector<double>& diag);

  const ConePtr& structure() const { return structure_; }
  const Vector& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }

  double diag(int k) const { return coords_[k]; }
  /// Coefficients of X_lk in the orthonormal basis of V_lk.
  Eigen::VectorBlock<const Vector> block(int l, int k) const;

  StructuredMatrix operator+(const StructuredMatrix& o) const;
  StructuredMatrix operator-(const StructuredMatrix& o) const;
  StructuredMatrix operator-() const;
  StructuredMatrix operator*(double a) const;

 private:
  ConePtr structure_;
  Vector coords_;
};

inline StructuredMatrix operator*(double a, const StructuredMatrix& x) { return x * a; }

/// Throws InvalidInput unless both elements live over the same structure.
void require_same_structure(const ConeStructure& a, const ConeStructure& b);

Matrix embed(const StructuredMatrix& x);

struct Projection {
  StructuredMatrix value;
  /// Frobenius norm of M - embed(value).
  double residual = 0.0;
};

/// Orthogonal projection of a (symmetrized) N x N matrix onto Z_V.
Projection project(const ConePtr& structure, const Matrix& m);

/// The lower triangular x-check: strict lower part of x plus half its diagonal.
Matrix lower_part(const StructuredMatrix& x);

/// x * y = lower(x) y + y lower(x)^T, projected back to Z_V.
/// Throws ClosureViolation when the product leaves Z_V.
StructuredMatrix triangle_product(const StructuredMatrix& x, const StructuredMatrix& y,
                                  const Tolerances& tol = default_tolerances());

/// (A|B) = tr(AB^T)/n_l for n_l x n_k matrices.
double block_inner(const Matrix& a, const Matrix& b);

/// Standard inner product  sum x_kk y_kk + 2 sum (X_lk|Y_lk).
double inner_product(const StructuredMatrix& x, const StructuredMatrix& y);
double norm(const StructuredMatrix& x);

/// Residual of m after orthogonal projection onto span(basis), for bases
/// orthonormal under block_inner.
double subspace_residual(const std::vector<Matrix>& basis, const Matrix& m);

/// Residual check used by every closure test: |residual| <= tol * (1 + scale).
bool within_closure(double residual, double scale, const Tolerances& tol);

struct AxiomWitness {
  /// 1-based block indices as in the axiom statement.
  int l = 0, k = 0, i = 0;
  int a_index = 0, b_index = 0;
  Matrix a, b, product;
  double residual = 0.0;
};

struct AxiomCheck {
  bool pass = true;
  double worst_residual = 0.0;
  std::optional<AxiomWitness> witness;
};

struct AxiomReport {
  AxiomCheck v1, v2, v3;
  bool all_pass() const { return v1.pass && v2.pass && v3.pass; }
};

/// Checks (V1)-(V3) on basis elements. Never throws.
AxiomReport validate_axioms(const ConeStructure& c, const Tolerances& tol = default_tolerances());

/// True iff the graph on {1..r} with edges {k,l} for dim V_lk > 0 is connected.
bool is_irreducible(const ConeStructure& c);

}  // namespace homocone
