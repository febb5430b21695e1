#include "homocone/cone_model.hpp"

#include <cmath>
#include <numeric>

#include "homocone/errors.hpp"

namespace homocone {

BlockPartition::BlockPartition(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw InvalidInput("partition must have rank >= 1");
  offsets_.reserve(sizes_.size());
  for (int n : sizes_) {
    if (n < 1) throw InvalidInput("block sizes must be positive");
    offsets_.push_back(total_);
    total_ += n;
  }
}

namespace {

std::vector<Matrix> orthonormalize(std::vector<Matrix> basis, const Tolerances& tol) {
  const std::size_t m = basis.size();
  bool already = true;
  for (std::size_t i = 0; i < m && already; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = block_inner(basis[i], basis[j]);
      if (std::abs(g - (i == j ? 1.0 : 0.0)) > tol.orthonormal_keep) {
        already = false;
        break;
      }
    }
  }
  if (already) return basis;

  // Modified Gram-Schmidt under (A|B) = tr(AB^T)/n_l.
  std::vector<Matrix> out;
  out.reserve(m);
  for (auto& a : basis) {
    Matrix v = a;
    const double scale = std::sqrt(block_inner(a, a));
    for (const auto& q : out) v -= block_inner(v, q) * q;
    const double nv = std::sqrt(block_inner(v, v));
    if (!(nv > 1e-12 * std::max(scale, 1e-300))) {
      throw InvalidInput("block basis is linearly dependent");
    }
    out.push_back(v / nv);
  }
  return out;
}

}  // namespace

ConeStructure::ConeStructure(std::string name, BlockPartition partition)
    : name_(std::move(name)), partition_(std::move(partition)) {}

ConePtr ConeStructure::create(std::string name, BlockPartition partition,
                              std::vector<BlockSpace> blocks, const Tolerances& tol) {
  std::shared_ptr<ConeStructure> c(new ConeStructure(std::move(name), std::move(partition)));
  const int r = c->rank();
  c->bases_.assign(static_cast<std::size_t>(r * (r - 1) / 2), {});
  std::vector<bool> seen(c->bases_.size(), false);
  for (auto& b : blocks) {
    if (b.k < 0 || b.l <= b.k || b.l >= r) {
      throw InvalidInput("block (" + std::to_string(b.l + 1) + "," + std::to_string(b.k + 1) +
                         ") needs 1 <= k < l <= r");
    }
    const int idx = pair_index(b.l, b.k);
    if (seen[idx]) throw InvalidInput("duplicate block entry");
    seen[idx] = true;
    const int nl = c->partition_.size(b.l);
    const int nk = c->partition_.size(b.k);
    for (const auto& a : b.basis) {
      if (a.rows() != nl || a.cols() != nk) {
        throw InvalidInput("basis matrix of V_" + std::to_string(b.l + 1) +
                           std::to_string(b.k + 1) + " must be " + std::to_string(nl) + "x" +
                           std::to_string(nk));
      }
      if (!a.allFinite()) throw InvalidInput("basis matrix has non-finite entries");
    }
    c->bases_[idx] = orthonormalize(std::move(b.basis), tol);
  }
  c->offsets_.resize(c->bases_.size());
  int off = r;
  for (std::size_t p = 0; p < c->bases_.size(); ++p) {
    c->offsets_[p] = off;
    off += static_cast<int>(c->bases_[p].size());
  }
  c->dim_ = off;
  return c;
}

std::vector<std::string> ConeStructure::coordinate_names() const {
  std::vector<std::string> names;
  names.reserve(dim_);
  for (int k = 0; k < rank(); ++k) names.push_back("d" + std::to_string(k + 1));
  for (int l = 1; l < rank(); ++l) {
    for (int k = 0; k < l; ++k) {
      for (int j = 0; j < block_dim(l, k); ++j) {
        names.push_back("b_" + std::to_string(l + 1) + "_" + std::to_string(k + 1) + "_" +
                        std::to_string(j + 1));
      }
    }
  }
  return names;
}

bool ConeStructure::same_as(const ConeStructure& other) const {
  if (this == &other) return true;
  if (!(partition_ == other.partition_) || dim_ != other.dim_) return false;
  for (std::size_t p = 0; p < bases_.size(); ++p) {
    if (bases_[p].size() != other.bases_[p].size()) return false;
    for (std::size_t j = 0; j < bases_[p].size(); ++j) {
      if (bases_[p][j] != other.bases_[p][j]) return false;
    }
  }
  return true;
}

void require_same_structure(const ConeStructure& a, const ConeStructure& b) {
  if (!a.same_as(b)) {
    throw InvalidInput("operands belong to different cone structures ('" + a.name() + "' vs '" +
                       b.name() + "')");
  }
}

// ---------------------------------------------------------------------------

StructuredMatrix::StructuredMatrix(ConePtr structure, Vector coords)
    : structure_(std::move(structure)), coords_(std::move(coords)) {
  if (!structure_) throw InvalidInput("null cone structure");
  if (coords_.size() != structure_->dim()) {
    throw InvalidInput("expected " + std::to_string(structure_->dim()) + " coordinates, got " +
                       std::to_string(coords_.size()));
  }
}

StructuredMatrix StructuredMatrix::zero(ConePtr structure) {
  const int d = structure->dim();
  return StructuredMatrix(std::move(structure), Vector::Zero(d));
}

StructuredMatrix StructuredMatrix::identity(ConePtr structure) {
  Vector v = Vector::Zero(structure->dim());
  v.head(structure->rank()).setOnes();
  return StructuredMatrix(std::move(structure), std::move(v));
}

StructuredMatrix StructuredMatrix::diagonal(ConePtr structure, const std::vector<double>& diag) {
  if (static_cast<int>(diag.size()) != structure->rank()) {
    throw InvalidInput("diagonal needs one value per block");
  }
  Vector v = Vector::Zero(structure->dim());
  for (std::size_t k = 0; k < diag.size(); ++k) v[static_cast<Eigen::Index>(k)] = diag[k];
  return StructuredMatrix(std::move(structure), std::move(v));
}

Eigen::VectorBlock<const Vector> StructuredMatrix::block(int l, int k) const {
  return coords_.segment(structure_->block_offset(l, k), structure_->block_dim(l, k));
}

StructuredMatrix StructuredMatrix::operator+(const StructuredMatrix& o) const {
  require_same_structure(*structure_, *o.structure_);
  return StructuredMatrix(structure_, coords_ + o.coords_);
}

StructuredMatrix StructuredMatrix::operator-(const StructuredMatrix& o) const {
  require_same_structure(*structure_, *o.structure_);
  return StructuredMatrix(structure_, coords_ - o.coords_);
}

StructuredMatrix StructuredMatrix::operator-() const { return StructuredMatrix(structure_, -coords_); }

StructuredMatrix StructuredMatrix::operator*(double a) const {
  return StructuredMatrix(structure_, coords_ * a);
}

// ---------------------------------------------------------------------------

Matrix embed(const StructuredMatrix& x) {
  const auto& c = *x.structure();
  const auto& part = c.partition();
  Matrix m = Matrix::Zero(c.matrix_size(), c.matrix_size());
  for (int k = 0; k < c.rank(); ++k) {
    const int o = part.row_offset(k);
    const int n = part.size(k);
    m.block(o, o, n, n).diagonal().setConstant(x.diag(k));
  }
  for (int l = 1; l < c.rank(); ++l) {
    for (int k = 0; k < l; ++k) {
      const auto& basis = c.basis(l, k);
      if (basis.empty()) continue;
      Matrix blk = Matrix::Zero(part.size(l), part.size(k));
      const auto coef = x.block(l, k);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        blk += coef[static_cast<Eigen::Index>(j)] * basis[j];
      }
      m.block(part.row_offset(l), part.row_offset(k), part.size(l), part.size(k)) = blk;
      m.block(part.row_offset(k), part.row_offset(l), part.size(k), part.size(l)) = blk.transpose();
    }
  }
  return m;
}

Projection project(const ConePtr& structure, const Matrix& m_in) {
  const auto& c = *structure;
  const auto& part = c.partition();
  const int big_n = c.matrix_size();
  if (m_in.rows() != big_n || m_in.cols() != big_n) {
    throw InvalidInput("project expects a " + std::to_string(big_n) + "x" + std::to_string(big_n) +
                       " matrix");
  }
  const Matrix m = 0.5 * (m_in + m_in.transpose());
  Vector coords = Vector::Zero(c.dim());
  for (int k = 0; k < c.rank(); ++k) {
    const int o = part.row_offset(k);
    const int n = part.size(k);
    // Mean of the diagonal, written so that a scalar block is read back exactly.
    const double base = m(o, o);
    double dev = 0.0;
    for (int i = 0; i < n; ++i) dev += m(o + i, o + i) - base;
    coords[k] = base + dev / n;
  }
  for (int l = 1; l < c.rank(); ++l) {
    for (int k = 0; k < l; ++k) {
      const auto& basis = c.basis(l, k);
      const auto blk = m.block(part.row_offset(l), part.row_offset(k), part.size(l), part.size(k));
      const int off = c.block_offset(l, k);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        coords[off + static_cast<int>(j)] = (blk.array() * basis[j].array()).sum() / part.size(l);
      }
    }
  }
  StructuredMatrix value(structure, std::move(coords));
  const double residual = (m_in - embed(value)).norm();
  return {std::move(value), residual};
}

Matrix lower_part(const StructuredMatrix& x) {
  Matrix m = embed(x);
  Matrix lower = m.triangularView<Eigen::StrictlyLower>();
  lower.diagonal() = 0.5 * m.diagonal();
  return lower;
}

bool within_closure(double residual, double scale, const Tolerances& tol) {
  return residual <= tol.closure * (1.0 + scale);
}

StructuredMatrix triangle_product(const StructuredMatrix& x, const StructuredMatrix& y,
                                  const Tolerances& tol) {
  require_same_structure(*x.structure(), *y.structure());
  const Matrix lx = lower_part(x);
  const Matrix ey = embed(y);
  const Matrix prod = lx * ey + ey * lx.transpose();
  auto proj = project(x.structure(), prod);
  if (!within_closure(proj.residual, prod.norm(), tol)) {
    throw ClosureViolation("triangle product left Z_V (residual " + std::to_string(proj.residual) +
                           ")");
  }
  return std::move(proj.value);
}

double block_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("block_inner operands differ in shape");
  }
  if (a.rows() == 0) return 0.0;
  return (a.array() * b.array()).sum() / static_cast<double>(a.rows());
}

double inner_product(const StructuredMatrix& x, const StructuredMatrix& y) {
  require_same_structure(*x.structure(), *y.structure());
  const int r = x.structure()->rank();
  const auto& a = x.coords();
  const auto& b = y.coords();
  return a.head(r).dot(b.head(r)) + 2.0 * a.tail(a.size() - r).dot(b.tail(b.size() - r));
}

double norm(const StructuredMatrix& x) { return std::sqrt(inner_product(x, x)); }

double subspace_residual(const std::vector<Matrix>& basis, const Matrix& m) {
  Matrix rest = m;
  for (const auto& q : basis) rest -= block_inner(m, q) * q;
  return rest.norm();
}

// ---------------------------------------------------------------------------

namespace {

Matrix unit(const Matrix& a) {
  const double n = a.norm();
  return n > 0 ? Matrix(a / n) : a;
}

void record(AxiomCheck& check, double residual, const Tolerances& tol, AxiomWitness w) {
  check.worst_residual = std::max(check.worst_residual, residual);
  if (residual > tol.closure && check.pass) {
    check.pass = false;
    w.residual = residual;
    check.witness = std::move(w);
  }
}

}  // namespace

AxiomReport validate_axioms(const ConeStructure& c, const Tolerances& tol) {
  AxiomReport rep;
  const int r = c.rank();
  const auto& part = c.partition();
  for (int i = 0; i < r; ++i) {
    for (int k = i + 1; k < r; ++k) {
      for (int l = k + 1; l < r; ++l) {
        // (V1): V_lk V_ki in V_li.
        const auto& vlk = c.basis(l, k);
        const auto& vki = c.basis(k, i);
        for (std::size_t a = 0; a < vlk.size(); ++a) {
          for (std::size_t b = 0; b < vki.size(); ++b) {
            const Matrix p = unit(vlk[a]) * unit(vki[b]);
            record(rep.v1, subspace_residual(c.basis(l, i), p), tol,
                   {l + 1, k + 1, i + 1, static_cast<int>(a), static_cast<int>(b), vlk[a], vki[b],
                    p, 0.0});
          }
        }
        // (V2): V_li V_ki^T in V_lk.
        const auto& vli = c.basis(l, i);
        for (std::size_t a = 0; a < vli.size(); ++a) {
          for (std::size_t b = 0; b < vki.size(); ++b) {
            const Matrix p = unit(vli[a]) * unit(vki[b]).transpose();
            record(rep.v2, subspace_residual(vlk, p), tol,
                   {l + 1, k + 1, i + 1, static_cast<int>(a), static_cast<int>(b), vli[a], vki[b],
                    p, 0.0});
          }
        }
      }
    }
  }
  // (V3) polarized: A B^T + B A^T scalar for every pair of basis elements.
  for (int l = 1; l < r; ++l) {
    for (int k = 0; k < l; ++k) {
      const auto& v = c.basis(l, k);
      const int nl = part.size(l);
      for (std::size_t a = 0; a < v.size(); ++a) {
        for (std::size_t b = a; b < v.size(); ++b) {
          const Matrix ua = unit(v[a]);
          const Matrix ub = unit(v[b]);
          const Matrix p = ua * ub.transpose() + ub * ua.transpose();
          const double scalar = p.trace() / nl;
          const double res = (p - scalar * Matrix::Identity(nl, nl)).norm();
          record(rep.v3, res, tol,
                 {l + 1, k + 1, 0, static_cast<int>(a), static_cast<int>(b), v[a], v[b], p, 0.0});
        }
      }
    }
  }
  return rep;
}

bool is_irreducible(const ConeStructure& c) {
  const int r = c.rank();
  std::vector<int> parent(r);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int components = r;
  for (int l = 1; l < r; ++l) {
    for (int k = 0; k < l; ++k) {
      if (c.block_dim(l, k) == 0) continue;
      const int a = find(l), b = find(k);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
  }
  return components == 1;
}

}  // namespace homocone
