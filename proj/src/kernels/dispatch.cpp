#include <cstdlib>
#include <stdexcept>
#include <string>

#include "homocone/kernels.hpp"

namespace homocone::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, &scalar::weighted_columns, &scalar::centered_cross};
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::weighted_columns, &avx2::centered_cross};

const KernelTable& select() {
  if (const char* env = std::getenv("HOMOCONE_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return kScalar;
    if (v == "avx2") return table(Isa::Avx2);
  }
  return supported(Isa::Avx2) ? kAvx2 : kScalar;
}

}  // namespace

bool supported(Isa isa) { return isa == Isa::Scalar || avx2::available(); }

std::string_view name(Isa isa) { return isa == Isa::Scalar ? "scalar" : "avx2"; }

const KernelTable& table(Isa isa) {
  if (!supported(isa)) throw std::runtime_error("kernel variant '" + std::string(name(isa)) + "' unsupported");
  return isa == Isa::Scalar ? kScalar : kAvx2;
}

const KernelTable& active() {
  static const KernelTable& t = select();
  return t;
}

}  // namespace homocone::kernels
