#include "homocone/kernels.hpp"

namespace homocone::kernels::scalar {

void weighted_columns(const double* cols, std::size_t n, std::size_t d, const double* w, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc = acc + w[j] * cols[j * n + i];
    out[i] = acc;
  }
}

double centered_cross(const double* a, double ma, const double* b, double mb, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (a[i] - ma) * (b[i] - mb);
  return acc;
}

}  // namespace homocone::kernels::scalar
