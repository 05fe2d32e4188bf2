#include "modsel/simd/kernels.hpp"

#include <cmath>
#include <cstddef>

namespace modsel::simd::scalar {

void mix_radix(std::span<const std::uint32_t> ids, std::span<const std::uint32_t> digits,
               std::uint32_t radix, std::span<std::uint32_t> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = ids[i] * radix + digits[i];
}

double neg_plogp_sum(std::span<const double> masses, double total) {
  const double inv = 1.0 / total;
  double acc = 0.0;
  for (const double m : masses) {
    const double p = m * inv;
    if (p >= kMinProbability) acc -= p * std::log(p);
  }
  return acc;
}

}  // namespace modsel::simd::scalar
