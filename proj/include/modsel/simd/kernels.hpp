#pragma once

// Data-parallel inner loops behind the information measures. Every kernel has
// a scalar reference in modsel::simd::scalar; vector variants live in sibling
// namespaces and are picked at runtime by the dispatching entry points below.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace modsel::simd {

enum class Level { scalar, avx2 };

std::string_view level_name(Level level);

// Best level supported by both this build and the running CPU.
Level detected_level();

// Level used by the dispatching kernels: detected_level() unless lowered by
// force_level() or the MODSEL_SIMD=scalar environment variable.
Level active_level();

// Pins the dispatch level (std::nullopt restores auto-detection). Requests for
// an unsupported level fall back to scalar.
void force_level(std::optional<Level> level);

// Masses whose share of the total falls below this are treated as zero.
inline constexpr double kMinProbability = 1e-15;

// out[i] = ids[i] * radix + digits[i]. The caller guarantees the result fits
// in 32 bits.
void mix_radix(std::span<const std::uint32_t> ids, std::span<const std::uint32_t> digits,
               std::uint32_t radix, std::span<std::uint32_t> out);

// -sum (m / total) * ln(m / total) over the masses, in nats.
double neg_plogp_sum(std::span<const double> masses, double total);

namespace scalar {
void mix_radix(std::span<const std::uint32_t> ids, std::span<const std::uint32_t> digits,
               std::uint32_t radix, std::span<std::uint32_t> out);
double neg_plogp_sum(std::span<const double> masses, double total);
}  // namespace scalar

#if defined(MODSEL_HAVE_AVX2)
namespace avx2 {
void mix_radix(std::span<const std::uint32_t> ids, std::span<const std::uint32_t> digits,
               std::uint32_t radix, std::span<std::uint32_t> out);
double neg_plogp_sum(std::span<const double> masses, double total);
// Natural log of four positive normal doubles; exposed for accuracy tests.
void log4(const double* in, double* out);
}  // namespace avx2
#endif

}  // namespace modsel::simd
