#include "homocone/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homocone {

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL))) {}

double CounterRng::normal() {
  // Box-Muller, cosine branch only; one draw per call keeps streams stateless.
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::gamma(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw std::domain_error("gamma shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a+1) * U^{1/a}; combined in log space so tiny shapes
    // underflow gracefully to 0 instead of producing NaN.
    const double g = gamma(shape + 1.0);
    const double log_u = std::log(uniform());
    return std::exp(std::log(g) + log_u / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace homocone
