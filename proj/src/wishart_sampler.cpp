#include "homocone/wishart_sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <thread>

#include "homocone/errors.hpp"
#include "homocone/kernels.hpp"
#include "homocone/rng.hpp"

namespace homocone {

SampleBatch::SampleBatch(ConePtr structure, RieszParameter s, StructuredMatrix theta,
                         std::uint64_t seed, std::size_t count, std::vector<int> eps)
    : structure_(std::move(structure)),
      s_(std::move(s)),
      theta_(std::move(theta)),
      seed_(seed),
      count_(count),
      eps_(std::move(eps)),
      data_(static_cast<std::size_t>(structure_->dim()) * count, 0.0) {}

std::span<const double> SampleBatch::column(int j) const {
  return {data_.data() + static_cast<std::size_t>(j) * count_, count_};
}

std::span<double> SampleBatch::column(int j) {
  return {data_.data() + static_cast<std::size_t>(j) * count_, count_};
}

StructuredMatrix SampleBatch::sample(std::size_t i) const {
  Vector v(structure_->dim());
  for (int j = 0; j < structure_->dim(); ++j) v[j] = value(i, j);
  return StructuredMatrix(structure_, std::move(v));
}

std::vector<double> bartlett_shapes(const ConeStructure& c, std::span<const double> s,
                                    std::span<const int> eps, BartlettConvention convention) {
  const int r = c.rank();
  std::vector<double> shapes(static_cast<std::size_t>(r), 0.0);
  for (int k = 0; k < r; ++k) {
    if (eps[static_cast<std::size_t>(k)] != 1) continue;
    double offset = 0.0;
    if (convention == BartlettConvention::RowCounts) {
      for (int i = 0; i < k; ++i) offset += eps[static_cast<std::size_t>(i)] * c.block_dim(k, i);
    } else {
      for (int l = k + 1; l < r; ++l) offset += eps[static_cast<std::size_t>(l)] * c.block_dim(l, k);
    }
    const double shape = s[static_cast<std::size_t>(k)] - 0.5 * offset;
    if (!(shape > 0.0)) {
      throw NotInGindikinSet("Bartlett shape for block " + std::to_string(k + 1) +
                             " is not positive");
    }
    shapes[static_cast<std::size_t>(k)] = shape;
  }
  return shapes;
}

namespace {

struct Generator {
  const ConeStructure& c;
  std::vector<int> eps;
  std::vector<double> shapes;
  Matrix left;  // dense lower factor applied before the outer product
  std::uint64_t seed;

  void run(SampleBatch& batch, std::size_t begin, std::size_t end) const {
    const auto& part = c.partition();
    const int big_n = c.matrix_size();
    const int r = c.rank();
    const double block_sd = std::sqrt(0.5);
    Matrix t(big_n, big_n), u(big_n, big_n), m(big_n, big_n);
    Vector e(big_n);
    for (int k = 0; k < r; ++k) e.segment(part.row_offset(k), part.size(k)).setConstant(eps[k]);

    for (std::size_t i = begin; i < end; ++i) {
      CounterRng rng(seed, i);
      t.setZero();
      for (int k = 0; k < r; ++k) {
        const double tk = eps[k] == 1 ? std::sqrt(rng.gamma(shapes[k])) : 1.0;
        t.block(part.row_offset(k), part.row_offset(k), part.size(k), part.size(k))
            .diagonal()
            .setConstant(tk);
      }
      for (int l = 1; l < r; ++l) {
        for (int k = 0; k < l; ++k) {
          if (eps[k] != 1) continue;
          auto blk = t.block(part.row_offset(l), part.row_offset(k), part.size(l), part.size(k));
          for (const auto& a : c.basis(l, k)) blk += (block_sd * rng.normal()) * a;
        }
      }
      u.noalias() = left * t;
      m.noalias() = u * e.asDiagonal() * u.transpose();

      for (int k = 0; k < r; ++k) {
        const int o = part.row_offset(k);
        const double base = m(o, o);
        double dev = 0.0;
        for (int q = 0; q < part.size(k); ++q) dev += m(o + q, o + q) - base;
        batch.column(k)[i] = base + dev / part.size(k);
      }
      for (int l = 1; l < r; ++l) {
        for (int k = 0; k < l; ++k) {
          const auto& basis = c.basis(l, k);
          const int off = c.block_offset(l, k);
          const auto blk = m.block(part.row_offset(l), part.row_offset(k), part.size(l), part.size(k));
          for (std::size_t j = 0; j < basis.size(); ++j) {
            batch.column(off + static_cast<int>(j))[i] =
                (blk.array() * basis[j].array()).sum() / part.size(l);
          }
        }
      }
    }
  }
};

void run_parallel(const Generator& gen, SampleBatch& batch, int threads) {
  const std::size_t n = batch.count();
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    gen.run(batch, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&gen, &batch, b, e] { gen.run(batch, b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SampleBatch sample_wishart(const RieszParameter& s, const StructuredMatrix& theta, std::size_t n,
                           std::uint64_t seed, const SamplerOptions& opts) {
  const auto& c = theta.structure();
  if (static_cast<int>(s.s.size()) != c->rank()) throw InvalidInput("s must have r entries");
  const auto stratum = gindikin_membership(*c, s.s, opts.tol);
  if (!stratum) throw NotInGindikinSet("s is outside the Gindikin-Wallach set");
  if (std::any_of(stratum->begin(), stratum->end(), [](int e) { return e != 1; })) {
    throw NonRegularStratum("s lies in a singular stratum; use sample_singular");
  }
  const auto dec = dual_decompose(-theta, opts.tol);
  const auto inv = inverse(dec.factor, opts.tol);

  std::vector<int> eps(static_cast<std::size_t>(c->rank()), 1);
  Generator gen{*c, eps, bartlett_shapes(*c, s.s, eps, opts.convention), embed_lower(inv), seed};
  SampleBatch batch(c, RieszParameter::classify(*c, s.s, opts.tol), theta, seed, n, eps);
  run_parallel(gen, batch, opts.threads);
  return batch;
}

SampleBatch sample_singular(const ConePtr& c, const RieszParameter& s, std::span<const int> eps,
                            std::size_t n, std::uint64_t seed, const SamplerOptions& opts) {
  if (static_cast<int>(eps.size()) != c->rank() || static_cast<int>(s.s.size()) != c->rank()) {
    throw InvalidInput("s and eps must have r entries");
  }
  for (int e : eps) {
    if (e != 0 && e != 1) throw InvalidInput("stratum entries must be 0 or 1");
  }
  const auto stratum = gindikin_membership(*c, s.s, opts.tol);
  if (!stratum || !std::equal(stratum->begin(), stratum->end(), eps.begin())) {
    throw NotInGindikinSet("s does not lie in the requested stratum");
  }
  std::vector<int> e(eps.begin(), eps.end());
  const int big_n = c->matrix_size();
  Generator gen{*c, e, bartlett_shapes(*c, s.s, e, opts.convention), Matrix::Identity(big_n, big_n),
                seed};
  SampleBatch batch(c, RieszParameter::classify(*c, s.s, opts.tol),
                    -StructuredMatrix::identity(c), seed, n, e);
  run_parallel(gen, batch, opts.threads);
  return batch;
}

SampleBatch map_samples(const SampleBatch& b, const LinearMap& g) {
  require_same_structure(*b.structure(), *g.structure());
  const Matrix m = g.coordinate_matrix();
  const int d = b.structure()->dim();
  SampleBatch out(b.structure(), b.s(), b.theta(), b.seed(), b.count(), b.eps());
  Vector x(d);
  for (std::size_t i = 0; i < b.count(); ++i) {
    for (int j = 0; j < d; ++j) x[j] = b.value(i, j);
    const Vector y = m * x;
    for (int j = 0; j < d; ++j) out.column(j)[i] = y[j];
  }
  return out;
}

std::vector<double> projections(const SampleBatch& b, const StructuredMatrix& eta) {
  require_same_structure(*b.structure(), *eta.structure());
  const auto& c = *b.structure();
  std::vector<double> w(static_cast<std::size_t>(c.dim()));
  for (int j = 0; j < c.dim(); ++j) w[static_cast<std::size_t>(j)] = c.weight(j) * eta.coords()[j];
  std::vector<double> out(b.count());
  kernels::active().weighted_columns(b.data().data(), b.count(), w.size(), w.data(), out.data());
  return out;
}

LaplaceEstimate empirical_laplace(const SampleBatch& b, const StructuredMatrix& eta) {
  const auto v = projections(b, eta);
  const std::size_t n = v.size();
  LaplaceEstimate est;
  if (n == 0) return est;
  double sum = 0.0, vmax = -INFINITY, emax = 0.0;
  for (double x : v) {
    const double e = std::exp(x);
    sum += e;
    vmax = std::max(vmax, x);
    emax = std::max(emax, e);
  }
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : v) {
    const double d = std::exp(x) - mean;
    ss += d * d;
  }
  est.estimate = mean;
  est.std_error = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  est.dominated = vmax > 0.0 && emax > 0.1 * sum;
  return est;
}

Moments empirical_moments(const SampleBatch& b) {
  const auto& c = b.structure();
  const int d = c->dim();
  const std::size_t n = b.count();
  if (n < 2) throw InvalidInput("moments need at least two samples");
  Vector mean(d);
  for (int j = 0; j < d; ++j) {
    double acc = 0.0;
    for (double x : b.column(j)) acc += x;
    mean[j] = acc / static_cast<double>(n);
  }
  const auto& k = kernels::active();
  Matrix cov(d, d);
  for (int a = 0; a < d; ++a) {
    for (int q = a; q < d; ++q) {
      const double cross =
          k.centered_cross(b.column(a).data(), mean[a], b.column(q).data(), mean[q], n);
      cov(a, q) = cov(q, a) = cross / static_cast<double>(n - 1);
    }
  }
  return {StructuredMatrix(c, std::move(mean)), std::move(cov)};
}

namespace {

void put_double(std::ostream& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_csv(const SampleBatch& b, std::ostream& out) {
  const auto names = b.structure()->coordinate_names();
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  out << '\n';
  const int d = b.structure()->dim();
  for (std::size_t i = 0; i < b.count(); ++i) {
    for (int j = 0; j < d; ++j) {
      if (j) out << ',';
      put_double(out, b.value(i, j));
    }
    out << '\n';
  }
}

nlohmann::json sidecar_json(const SampleBatch& b) {
  std::vector<double> theta(b.theta().coords().data(),
                            b.theta().coords().data() + b.theta().coords().size());
  nlohmann::json j;
  j["cone"] = b.structure()->name();
  j["s"] = b.s().s;
  j["theta"] = theta;
  j["seed"] = b.seed();
  j["n"] = b.count();
  j["coordinates"] = b.structure()->coordinate_names();
  j["stratum"] = b.eps();
  return j;
}

}  // namespace homocone
