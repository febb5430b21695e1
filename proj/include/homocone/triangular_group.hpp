#pragma once

// The triangular group H_V: lower triangular elements of Z_V with positive
// diagonal, acting on Z_V by rho(T)x = T x T^T, together with the adjoint
// action rho*(T), characters chi_s and the two decompositions
//   x  = rho(T)  I   (structured Cholesky, x in the cone)
//   xi = rho*(T) I   (dual decomposition, xi in the dual cone).

#include <span>
#include <vector>

#include "homocone/cone_model.hpp"

namespace homocone {

class TriangularElement {
 public:
  /// `params` holds t_11..t_rr followed by block coefficients in coordinate
  /// order (the same layout as StructuredMatrix). Throws InvalidInput unless
  /// every t_kk > 0.
  TriangularElement(ConePtr structure, Vector params);

  static TriangularElement identity(ConePtr structure);
  static TriangularElement diagonal(ConePtr structure, const std::vector<double>& t);

  const ConePtr& structure() const { return structure_; }
  const Vector& params() const { return params_; }
  double t(int k) const { return params_[k]; }
  Eigen::VectorBlock<const Vector> block(int l, int k) const;

 private:
  ConePtr structure_;
  Vector params_;
};

/// Dense lower triangular N x N matrix of T.
Matrix embed_lower(const TriangularElement& t);

/// Projects a dense lower triangular matrix onto H_V-coordinates without
/// positivity checks; returns parameters and the Frobenius residual.
struct LowerProjection {
  Vector params;
  double residual = 0.0;
};
LowerProjection project_lower(const ConeStructure& c, const Matrix& m);

/// A linear operator on Z_V stored in an orthonormal basis of Z_V
/// (coordinate j scaled by sqrt(weight(j))).
class LinearMap {
 public:
  enum class Kind { Rho, RhoStar, Scalar, Generic };

  LinearMap(ConePtr structure, Matrix orthonormal, Kind kind = Kind::Generic);

  static LinearMap scalar(ConePtr structure, double c);
  static LinearMap identity(ConePtr structure) { return scalar(std::move(structure), 1.0); }
  /// Builds the map from a matrix acting on raw coordinates.
  static LinearMap from_coordinates(ConePtr structure, const Matrix& coord_matrix,
                                    Kind kind = Kind::Generic);

  const ConePtr& structure() const { return structure_; }
  const Matrix& orthonormal() const { return m_; }
  Matrix coordinate_matrix() const;
  Kind kind() const { return kind_; }

  StructuredMatrix apply(const StructuredMatrix& x) const;
  /// Adjoint with respect to the standard inner product.
  LinearMap adjoint() const;
  LinearMap inverse() const;
  /// (*this) o other.
  LinearMap then_after(const LinearMap& other) const;

 private:
  ConePtr structure_;
  Matrix m_;
  Kind kind_;
};

StructuredMatrix rho_apply(const TriangularElement& t, const StructuredMatrix& x,
                           const Tolerances& tol = default_tolerances());
LinearMap rho_map(const TriangularElement& t, const Tolerances& tol = default_tolerances());
LinearMap rho_star_map(const TriangularElement& t, const Tolerances& tol = default_tolerances());
/// Adjoint action, evaluated as the transpose of rho_map.
StructuredMatrix rho_star_apply(const TriangularElement& t, const StructuredMatrix& xi,
                                const Tolerances& tol = default_tolerances());
/// Same adjoint action through the trace form <rho(T)x, xi> = tr(x T^T G(xi) T);
/// cheaper, used inside the dual Newton solve.
StructuredMatrix rho_star_apply_trace(const TriangularElement& t, const StructuredMatrix& xi);

TriangularElement compose(const TriangularElement& s, const TriangularElement& t,
                          const Tolerances& tol = default_tolerances());
TriangularElement inverse(const TriangularElement& t, const Tolerances& tol = default_tolerances());

/// T in H_V with rho(T) I = x. Throws NotInCone or StructureLeak.
TriangularElement cholesky_structured(const StructuredMatrix& x,
                                      const Tolerances& tol = default_tolerances());

struct DualDecomposition {
  TriangularElement factor;
  int iterations = 0;
  /// |rho*(T)I - xi| / |xi| in the standard norm.
  double relative_residual = 0.0;
};

/// T in H_V with rho*(T) I = xi by damped Newton from T = I.
/// Throws NotInDualCone when the iteration budget is exhausted; this doubles
/// as the dual-cone membership test.
DualDecomposition dual_decompose(const StructuredMatrix& xi,
                                 const Tolerances& tol = default_tolerances());
bool in_dual_cone(const StructuredMatrix& xi, const Tolerances& tol = default_tolerances());
bool in_cone(const StructuredMatrix& x);

/// chi_s(T) = prod t_kk^{2 s_k}.
double character(std::span<const double> s, const TriangularElement& t);
double log_character(std::span<const double> s, const TriangularElement& t);

}  // namespace homocone
