#include "homocone/triangular_group.hpp"

#include <cmath>

#include "homocone/errors.hpp"

namespace homocone {

namespace {

Matrix embed_lower_params(const ConeStructure& c, const Vector& p) {
  const auto& part = c.partition();
  Matrix m = Matrix::Zero(c.matrix_size(), c.matrix_size());
  for (int k = 0; k < c.rank(); ++k) {
    m.block(part.row_offset(k), part.row_offset(k), part.size(k), part.size(k))
        .diagonal()
        .setConstant(p[k]);
  }
  for (int l = 1; l < c.rank(); ++l) {
    for (int k = 0; k < l; ++k) {
      const auto& basis = c.basis(l, k);
      const int off = c.block_offset(l, k);
      auto blk = m.block(part.row_offset(l), part.row_offset(k), part.size(l), part.size(k));
      for (std::size_t j = 0; j < basis.size(); ++j) blk += p[off + static_cast<int>(j)] * basis[j];
    }
  }
  return m;
}

/// Coordinates of the functional x -> <Q, embed(x)>_F, divided by the
/// coordinate weights; Q symmetric.
Vector trace_readout(const ConeStructure& c, const Matrix& q) {
  const auto& part = c.partition();
  Vector out(c.dim());
  for (int k = 0; k < c.rank(); ++k) {
    out[k] = q.block(part.row_offset(k), part.row_offset(k), part.size(k), part.size(k)).trace();
  }
  for (int l = 1; l < c.rank(); ++l) {
    for (int k = 0; k < l; ++k) {
      const auto& basis = c.basis(l, k);
      const int off = c.block_offset(l, k);
      const auto blk = q.block(part.row_offset(l), part.row_offset(k), part.size(l), part.size(k));
      for (std::size_t j = 0; j < basis.size(); ++j) {
        out[off + static_cast<int>(j)] = (blk.array() * basis[j].array()).sum();
      }
    }
  }
  return out;
}

/// G(xi): embed(xi) with block (a,b) divided by n_max(a,b), so that
/// <y, xi> = tr(embed(y) G(xi)) for y in Z_V.
Matrix metric_matrix(const StructuredMatrix& xi) {
  const auto& c = *xi.structure();
  const auto& part = c.partition();
  Matrix g = embed(xi);
  for (int a = 0; a < c.rank(); ++a) {
    for (int b = 0; b < c.rank(); ++b) {
      g.block(part.row_offset(a), part.row_offset(b), part.size(a), part.size(b)) /=
          part.size(std::max(a, b));
    }
  }
  return g;
}

double weighted_norm(const ConeStructure& c, const Vector& v) {
  const int r = c.rank();
  return std::sqrt(v.head(r).squaredNorm() + 2.0 * v.tail(v.size() - r).squaredNorm());
}

Vector sqrt_weights(const ConeStructure& c) {
  Vector w(c.dim());
  for (int j = 0; j < c.dim(); ++j) w[j] = std::sqrt(c.weight(j));
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------

TriangularElement::TriangularElement(ConePtr structure, Vector params)
    : structure_(std::move(structure)), params_(std::move(params)) {
  if (!structure_) throw InvalidInput("null cone structure");
  if (params_.size() != structure_->dim()) {
    throw InvalidInput("triangular element needs " + std::to_string(structure_->dim()) +
                       " parameters");
  }
  for (int k = 0; k < structure_->rank(); ++k) {
    if (!(params_[k] > 0.0) || !std::isfinite(params_[k])) {
      throw InvalidInput("triangular element needs positive diagonal t_kk");
    }
  }
}

TriangularElement TriangularElement::identity(ConePtr structure) {
  Vector p = Vector::Zero(structure->dim());
  p.head(structure->rank()).setOnes();
  return TriangularElement(std::move(structure), std::move(p));
}

TriangularElement TriangularElement::diagonal(ConePtr structure, const std::vector<double>& t) {
  if (static_cast<int>(t.size()) != structure->rank()) {
    throw InvalidInput("diagonal element needs one value per block");
  }
  Vector p = Vector::Zero(structure->dim());
  for (std::size_t k = 0; k < t.size(); ++k) p[static_cast<Eigen::Index>(k)] = t[k];
  return TriangularElement(std::move(structure), std::move(p));
}

Eigen::VectorBlock<const Vector> TriangularElement::block(int l, int k) const {
  return params_.segment(structure_->block_offset(l, k), structure_->block_dim(l, k));
}

Matrix embed_lower(const TriangularElement& t) { return embed_lower_params(*t.structure(), t.params()); }

LowerProjection project_lower(const ConeStructure& c, const Matrix& m) {
  const auto& part = c.partition();
  Vector p = Vector::Zero(c.dim());
  for (int k = 0; k < c.rank(); ++k) {
    const int o = part.row_offset(k);
    const double base = m(o, o);
    double dev = 0.0;
    for (int i = 0; i < part.size(k); ++i) dev += m(o + i, o + i) - base;
    p[k] = base + dev / part.size(k);
  }
  for (int l = 1; l < c.rank(); ++l) {
    for (int k = 0; k < l; ++k) {
      const auto& basis = c.basis(l, k);
      const int off = c.block_offset(l, k);
      const auto blk = m.block(part.row_offset(l), part.row_offset(k), part.size(l), part.size(k));
      for (std::size_t j = 0; j < basis.size(); ++j) {
        p[off + static_cast<int>(j)] = (blk.array() * basis[j].array()).sum() / part.size(l);
      }
    }
  }
  const double residual = (m - embed_lower_params(c, p)).norm();
  return {std::move(p), residual};
}

// ---------------------------------------------------------------------------

LinearMap::LinearMap(ConePtr structure, Matrix orthonormal, Kind kind)
    : structure_(std::move(structure)), m_(std::move(orthonormal)), kind_(kind) {
  const int d = structure_->dim();
  if (m_.rows() != d || m_.cols() != d) throw InvalidInput("linear map has wrong dimension");
}

LinearMap LinearMap::scalar(ConePtr structure, double c) {
  const int d = structure->dim();
  return LinearMap(std::move(structure), c * Matrix::Identity(d, d), Kind::Scalar);
}

LinearMap LinearMap::from_coordinates(ConePtr structure, const Matrix& coord_matrix, Kind kind) {
  const Vector w = sqrt_weights(*structure);
  Matrix m = w.asDiagonal() * coord_matrix * w.cwiseInverse().asDiagonal();
  return LinearMap(std::move(structure), std::move(m), kind);
}

Matrix LinearMap::coordinate_matrix() const {
  const Vector w = sqrt_weights(*structure_);
  return w.cwiseInverse().asDiagonal() * m_ * w.asDiagonal();
}

StructuredMatrix LinearMap::apply(const StructuredMatrix& x) const {
  require_same_structure(*structure_, *x.structure());
  const Vector w = sqrt_weights(*structure_);
  Vector u = w.cwiseProduct(x.coords());
  return StructuredMatrix(x.structure(), (m_ * u).cwiseQuotient(w));
}

LinearMap LinearMap::adjoint() const {
  Kind k = kind_;
  if (kind_ == Kind::Rho) k = Kind::RhoStar;
  else if (kind_ == Kind::RhoStar) k = Kind::Rho;
  return LinearMap(structure_, m_.transpose(), k);
}

LinearMap LinearMap::inverse() const {
  Eigen::PartialPivLU<Matrix> lu(m_);
  Matrix inv = lu.inverse();
  if (!inv.allFinite()) throw InvalidInput("linear map is singular");
  return LinearMap(structure_, std::move(inv), kind_ == Kind::Scalar ? Kind::Scalar : Kind::Generic);
}

LinearMap LinearMap::then_after(const LinearMap& other) const {
  require_same_structure(*structure_, *other.structure_);
  const bool scalar = kind_ == Kind::Scalar && other.kind_ == Kind::Scalar;
  return LinearMap(structure_, m_ * other.m_, scalar ? Kind::Scalar : Kind::Generic);
}

// ---------------------------------------------------------------------------

StructuredMatrix rho_apply(const TriangularElement& t, const StructuredMatrix& x,
                           const Tolerances& tol) {
  require_same_structure(*t.structure(), *x.structure());
  const Matrix l = embed_lower(t);
  const Matrix m = l * embed(x) * l.transpose();
  auto proj = project(x.structure(), m);
  if (!within_closure(proj.residual, m.norm(), tol)) {
    throw ClosureViolation("rho(T)x left Z_V (residual " + std::to_string(proj.residual) + ")");
  }
  return std::move(proj.value);
}

LinearMap rho_map(const TriangularElement& t, const Tolerances& tol) {
  const auto& s = t.structure();
  const int d = s->dim();
  Matrix coord(d, d);
  for (int j = 0; j < d; ++j) {
    StructuredMatrix e(s, Vector::Unit(d, j));
    coord.col(j) = rho_apply(t, e, tol).coords();
  }
  return LinearMap::from_coordinates(s, coord, LinearMap::Kind::Rho);
}

LinearMap rho_star_map(const TriangularElement& t, const Tolerances& tol) {
  const auto m = rho_map(t, tol);
  return LinearMap(m.structure(), m.orthonormal().transpose(), LinearMap::Kind::RhoStar);
}

StructuredMatrix rho_star_apply(const TriangularElement& t, const StructuredMatrix& xi,
                                const Tolerances& tol) {
  require_same_structure(*t.structure(), *xi.structure());
  return rho_star_map(t, tol).apply(xi);
}

StructuredMatrix rho_star_apply_trace(const TriangularElement& t, const StructuredMatrix& xi) {
  require_same_structure(*t.structure(), *xi.structure());
  const auto& c = *xi.structure();
  const Matrix l = embed_lower(t);
  const Matrix q = l.transpose() * metric_matrix(xi) * l;
  // <Q, embed(e_j)>_F over weight(j): the factor 2 of a block coordinate
  // cancels against its two mirrored entries.
  Vector v = trace_readout(c, 0.5 * (q + q.transpose()));
  return StructuredMatrix(xi.structure(), std::move(v));
}

TriangularElement compose(const TriangularElement& s, const TriangularElement& t,
                          const Tolerances& tol) {
  require_same_structure(*s.structure(), *t.structure());
  const Matrix m = embed_lower(s) * embed_lower(t);
  auto proj = project_lower(*s.structure(), m);
  if (!within_closure(proj.residual, m.norm(), tol)) {
    throw ClosureViolation("product of triangular elements left H_V (residual " +
                           std::to_string(proj.residual) + ")");
  }
  return TriangularElement(s.structure(), std::move(proj.params));
}

TriangularElement inverse(const TriangularElement& t, const Tolerances& tol) {
  const Matrix l = embed_lower(t);
  const int n = static_cast<int>(l.rows());
  const Matrix inv = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  auto proj = project_lower(*t.structure(), inv);
  if (!within_closure(proj.residual, inv.norm(), tol)) {
    throw ClosureViolation("inverse left H_V (residual " + std::to_string(proj.residual) + ")");
  }
  return TriangularElement(t.structure(), std::move(proj.params));
}

TriangularElement cholesky_structured(const StructuredMatrix& x, const Tolerances& tol) {
  const Matrix m = embed(x);
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NotInCone("matrix is not positive definite");
  const Matrix l = llt.matrixL();
  if ((l.diagonal().array() <= 0.0).any()) throw NotInCone("matrix is not positive definite");
  auto proj = project_lower(*x.structure(), l);
  if (!within_closure(proj.residual, l.norm(), tol)) {
    throw StructureLeak("Cholesky factor leaves H_V (residual " + std::to_string(proj.residual) +
                        ")");
  }
  return TriangularElement(x.structure(), std::move(proj.params));
}

// ---------------------------------------------------------------------------

namespace {

struct DualSystem {
  const ConeStructure& c;
  Matrix g;                        // metric_matrix(I)
  std::vector<Matrix> directions;  // dT/dp_m as dense lower matrices

  explicit DualSystem(const ConePtr& s) : c(*s), g(metric_matrix(StructuredMatrix::identity(s))) {
    const int d = c.dim();
    directions.reserve(d);
    for (int m = 0; m < d; ++m) directions.push_back(embed_lower_params(c, Vector::Unit(d, m)));
  }

  Vector value(const Vector& p) const {
    const Matrix l = embed_lower_params(c, p);
    return trace_readout(c, l.transpose() * g * l);
  }

  Matrix jacobian(const Vector& p) const {
    const Matrix l = embed_lower_params(c, p);
    const Matrix gl = g * l;
    const int d = c.dim();
    Matrix j(d, d);
    for (int m = 0; m < d; ++m) {
      const Matrix a = directions[m].transpose() * gl;
      j.col(m) = trace_readout(c, a + a.transpose());
    }
    return j;
  }
};

}  // namespace

DualDecomposition dual_decompose(const StructuredMatrix& xi, const Tolerances& tol) {
  const auto& s = xi.structure();
  const auto& c = *s;
  const Vector target = xi.coords();
  const double scale = weighted_norm(c, target);
  if (!target.allFinite() || !(scale > 0.0)) throw NotInDualCone("degenerate point");

  DualSystem sys(s);
  Vector p = Vector::Zero(c.dim());
  p.head(c.rank()).setOnes();
  Vector res = target - sys.value(p);
  double rn = weighted_norm(c, res);
  const double stop = 1e-15 * scale;
  int it = 0;
  for (; it < tol.dual_max_iterations && rn > stop; ++it) {
    const Vector step = sys.jacobian(p).partialPivLu().solve(res);
    if (!step.allFinite()) break;
    double alpha = 1.0;
    bool accepted = false;
    for (int h = 0; h < 60; ++h, alpha *= 0.5) {
      const Vector trial = p + alpha * step;
      if ((trial.head(c.rank()).array() <= 0.0).any()) continue;
      const Vector tres = target - sys.value(trial);
      const double tn = weighted_norm(c, tres);
      if (tn < (1.0 - 1e-4 * alpha) * rn) {
        p = trial;
        res = tres;
        rn = tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  const double rel = rn / scale;
  if (!(rel <= tol.dual_residual)) {
    throw NotInDualCone("dual decomposition did not converge (relative residual " +
                        std::to_string(rel) + " after " + std::to_string(it) + " iterations)");
  }
  return {TriangularElement(s, std::move(p)), it, rel};
}

bool in_dual_cone(const StructuredMatrix& xi, const Tolerances& tol) {
  try {
    dual_decompose(xi, tol);
    return true;
  } catch (const NotInDualCone&) {
    return false;
  }
}

bool in_cone(const StructuredMatrix& x) {
  Eigen::LLT<Matrix> llt(embed(x));
  return llt.info() == Eigen::Success;
}

double log_character(std::span<const double> s, const TriangularElement& t) {
  const int r = t.structure()->rank();
  if (static_cast<int>(s.size()) != r) throw InvalidInput("character needs r exponents");
  double acc = 0.0;
  for (int k = 0; k < r; ++k) acc += 2.0 * s[static_cast<std::size_t>(k)] * std::log(t.t(k));
  return acc;
}

double character(std::span<const double> s, const TriangularElement& t) {
  return std::exp(log_character(s, t));
}

}  // namespace homocone
