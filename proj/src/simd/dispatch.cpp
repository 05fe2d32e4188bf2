#include <atomic>
#include <cstdlib>
#include <string_view>

#include "modsel/simd/kernels.hpp"

namespace modsel::simd {
namespace {

Level probe_cpu() {
#if defined(MODSEL_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Level::avx2;
#endif
  return Level::scalar;
}

Level initial_level() {
  const Level detected = detected_level();
  if (const char* env = std::getenv("MODSEL_SIMD"); env != nullptr && std::string_view(env) == "scalar")
    return Level::scalar;
  return detected;
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{initial_level()};
  return level;
}

}  // namespace

std::string_view level_name(Level level) {
  switch (level) {
    case Level::scalar:
      return "scalar";
    case Level::avx2:
      return "avx2";
  }
  return "unknown";
}

Level detected_level() {
  static const Level level = probe_cpu();
  return level;
}

Level active_level() { return current().load(std::memory_order_relaxed); }

void force_level(std::optional<Level> level) {
  Level target = level.value_or(initial_level());
  if (target == Level::avx2 && detected_level() != Level::avx2) target = Level::scalar;
  current().store(target, std::memory_order_relaxed);
}

void mix_radix(std::span<const std::uint32_t> ids, std::span<const std::uint32_t> digits,
               std::uint32_t radix, std::span<std::uint32_t> out) {
#if defined(MODSEL_HAVE_AVX2)
  if (active_level() == Level::avx2) return avx2::mix_radix(ids, digits, radix, out);
#endif
  scalar::mix_radix(ids, digits, radix, out);
}

double neg_plogp_sum(std::span<const double> masses, double total) {
#if defined(MODSEL_HAVE_AVX2)
  if (active_level() == Level::avx2) return avx2::neg_plogp_sum(masses, total);
#endif
  return scalar::neg_plogp_sum(masses, total);
}

}  // namespace modsel::simd
