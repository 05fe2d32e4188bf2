// Compiled with -mavx2 -mfma; only reached when the CPU reports both.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "modsel/simd/kernels.hpp"

namespace modsel::simd::avx2 {
namespace {

// log(1+x) = x - x^2/2 + x^3 P(x)/Q(x) on [1/sqrt2 - 1, sqrt2 - 1] (Cephes).
constexpr double kP[] = {1.01875663804580931796E-4, 4.97494994976747001425E-1,
                         4.70579119878881725854E0,  1.44989225341610930846E1,
                         1.79368678507819816313E1,  7.70838733755885391666E0};
constexpr double kQ[] = {1.12873587189167450590E1, 4.52279145837532221105E1,
                         8.29875266912776603211E1, 7.11544750618563894466E1,
                         2.31251620126765340583E1};

// Inputs must be positive and normal.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mantissa_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_exponent = _mm256_set1_epi64x(0x3FE0000000000000LL);
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mantissa_mask), half_exponent));

  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256i packed =
      _mm256_permutevar8x32_epi32(biased, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
  __m256d e = _mm256_sub_pd(_mm256_cvtepi32_pd(_mm256_castsi256_si128(packed)),
                            _mm256_set1_pd(1022.0));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d below = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(below, one));
  m = _mm256_add_pd(m, _mm256_and_pd(below, m));
  m = _mm256_sub_pd(m, one);

  const __m256d z = _mm256_mul_pd(m, m);
  __m256d p = _mm256_set1_pd(kP[0]);
  for (int i = 1; i < 6; ++i) p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(kP[i]));
  __m256d q = _mm256_add_pd(m, _mm256_set1_pd(kQ[0]));
  for (int i = 1; i < 5; ++i) q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(kQ[i]));

  __m256d y = _mm256_mul_pd(m, _mm256_div_pd(_mm256_mul_pd(z, p), q));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
  __m256d r = _mm256_add_pd(m, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
}

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void log4(const double* in, double* out) { _mm256_storeu_pd(out, log_pd(_mm256_loadu_pd(in))); }

void mix_radix(std::span<const std::uint32_t> ids, std::span<const std::uint32_t> digits,
               std::uint32_t radix, std::span<std::uint32_t> out) {
  const std::size_t n = out.size();
  const __m256i r = _mm256_set1_epi32(static_cast<int>(radix));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ids.data() + i));
    const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(digits.data() + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i),
                        _mm256_add_epi32(_mm256_mullo_epi32(a, r), d));
  }
  for (; i < n; ++i) out[i] = ids[i] * radix + digits[i];
}

double neg_plogp_sum(std::span<const double> masses, double total) {
  const double inv = 1.0 / total;
  const std::size_t n = masses.size();
  const __m256d vinv = _mm256_set1_pd(inv);
  const __m256d floor = _mm256_set1_pd(kMinProbability);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(masses.data() + i), vinv);
    __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(masses.data() + i + 4), vinv);
    const __m256d k0 = _mm256_cmp_pd(p0, floor, _CMP_GE_OQ);
    const __m256d k1 = _mm256_cmp_pd(p1, floor, _CMP_GE_OQ);
    // Dropped lanes become p = 1, whose log is exactly 0.
    p0 = _mm256_blendv_pd(one, p0, k0);
    p1 = _mm256_blendv_pd(one, p1, k1);
    acc0 = _mm256_fnmadd_pd(p0, log_pd(p0), acc0);
    acc1 = _mm256_fnmadd_pd(p1, log_pd(p1), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(masses.data() + i), vinv);
    const __m256d k0 = _mm256_cmp_pd(p0, floor, _CMP_GE_OQ);
    p0 = _mm256_blendv_pd(one, p0, k0);
    acc0 = _mm256_fnmadd_pd(p0, log_pd(p0), acc0);
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double p = masses[i] * inv;
    if (p >= kMinProbability) acc -= p * std::log(p);
  }
  return acc;
}

}  // namespace modsel::simd::avx2
