#pragma once

// Data-parallel inner loops over sample batches stored column-major
// (coordinate j of every sample contiguous). Each kernel has a scalar
// reference and an AVX2 variant; the variant is picked once at runtime from
// CPUID, or forced with HOMOCONE_KERNELS=scalar|avx2.
//
// weighted_columns is bit-identical across variants (same summation order
// per lane, no FMA contraction). centered_cross reassociates its reduction;
// variants agree to rounding.

#include <cstddef>
#include <string_view>

namespace homocone::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  /// out[i] = sum_j w[j] * cols[j*n + i] for i < n, j < d.
  void (*weighted_columns)(const double* cols, std::size_t n, std::size_t d, const double* w,
                           double* out);
  /// sum_i (a[i] - ma) * (b[i] - mb).
  double (*centered_cross)(const double* a, double ma, const double* b, double mb, std::size_t n);
};

bool supported(Isa isa);
std::string_view name(Isa isa);
/// Throws std::runtime_error when `isa` is not supported on this CPU.
const KernelTable& table(Isa isa);
const KernelTable& active();

namespace scalar {
void weighted_columns(const double* cols, std::size_t n, std::size_t d, const double* w, double* out);
double centered_cross(const double* a, double ma, const double* b, double mb, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool available();
void weighted_columns(const double* cols, std::size_t n, std::size_t d, const double* w, double* out);
double centered_cross(const double* a, double ma, const double* b, double mb, std::size_t n);
}  // namespace avx2

}  // namespace homocone::kernels
