#pragma once

// Vector elementary functions for 4 x double under AVX2 + FMA. Only for
// inclusion from translation units compiled with -mavx2 -mfma.
//
// exp: Cody-Waite reduction by ln 2 plus a degree-13 Taylor polynomial on
// |r| <= ln2/2, scaled by 2^n in two halves so that |n| up to 1075 stays
// representable. log: exponent/mantissa split with mantissa in
// [sqrt(2)/2, sqrt(2)], then the atanh series in f = (m-1)/(m+1).
// Both are within a few ulp of the libm results over the ranges used here.

#include <immintrin.h>

#include <cstdint>

namespace wmt::simd::avx2_math {

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(set1(-0.0), x); }

inline __m256d pow2_from_int32(__m128i k) {
  __m256i e = _mm256_cvtepi32_epi64(k);
  e = _mm256_add_epi64(e, _mm256_set1_epi64x(1023));
  e = _mm256_slli_epi64(e, 52);
  return _mm256_castsi256_pd(e);
}

inline __m256d exp_pd(__m256d x) {
  constexpr double kLog2e = 1.4426950408889634074;
  constexpr double kLn2Hi = 6.93147180369123816490e-01;
  constexpr double kLn2Lo = 1.90821492927058770002e-10;
  const __m256d underflow = _mm256_cmp_pd(x, set1(-745.2), _CMP_LT_OQ);
  x = _mm256_max_pd(_mm256_min_pd(x, set1(709.78)), set1(-745.2));
  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(x, set1(kLog2e)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, set1(kLn2Hi), x);
  r = _mm256_fnmadd_pd(n, set1(kLn2Lo), r);

  __m256d poly = set1(1.0 / 6227020800.0);  // 1/13!
  poly = _mm256_fmadd_pd(poly, r, set1(1.0 / 479001600.0));
  poly = _mm256_fmadd_pd(poly, r, set1(1.0 / 39916800.0));
  poly = _mm256_fmadd_pd(poly, r, set1(1.0 / 3628800.0));
  poly = _mm256_fmadd_pd(poly, r, set1(1.0 / 362880.0));
  poly = _mm256_fmadd_pd(poly, r, set1(1.0 / 40320.0));
  poly = _mm256_fmadd_pd(poly, r, set1(1.0 / 5040.0));
  poly = _mm256_fmadd_pd(poly, r, set1(1.0 / 720.0));
  poly = _mm256_fmadd_pd(poly, r, set1(1.0 / 120.0));
  poly = _mm256_fmadd_pd(poly, r, set1(1.0 / 24.0));
  poly = _mm256_fmadd_pd(poly, r, set1(1.0 / 6.0));
  poly = _mm256_fmadd_pd(poly, r, set1(0.5));
  poly = _mm256_fmadd_pd(poly, r, set1(1.0));
  poly = _mm256_fmadd_pd(poly, r, set1(1.0));

  const __m128i ni = _mm256_cvtpd_epi32(n);
  const __m128i n1 = _mm_srai_epi32(ni, 1);
  const __m128i n2 = _mm_sub_epi32(ni, n1);
  const __m256d res = _mm256_mul_pd(_mm256_mul_pd(poly, pow2_from_int32(n1)), pow2_from_int32(n2));
  return _mm256_andnot_pd(underflow, res);
}

// Natural log for finite x > 0 (subnormals included).
inline __m256d log_pd(__m256d x) {
  constexpr double kLn2Hi = 6.93147180369123816490e-01;
  constexpr double kLn2Lo = 1.90821492927058770002e-10;
  constexpr double kTwo54 = 18014398509481984.0;
  const __m256d tiny = _mm256_cmp_pd(x, set1(2.2250738585072014e-308), _CMP_LT_OQ);
  x = _mm256_blendv_pd(x, _mm256_mul_pd(x, set1(kTwo54)), tiny);
  const __m256d bias = _mm256_blendv_pd(set1(1023.0), set1(1023.0 + 54.0), tiny);

  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i e_raw = _mm256_srli_epi64(bits, 52);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(e_raw, magic)), set1(4503599627370496.0));
  e = _mm256_sub_pd(e, bias);
  const __m256i mant_bits = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                                            _mm256_set1_epi64x(0x3FF0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant_bits);
  const __m256d big = _mm256_cmp_pd(m, set1(1.41421356237309504880), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, set1(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, set1(1.0)));

  const __m256d f = _mm256_div_pd(_mm256_sub_pd(m, set1(1.0)), _mm256_add_pd(m, set1(1.0)));
  const __m256d s = _mm256_mul_pd(f, f);
  __m256d poly = set1(1.0 / 23.0);
  poly = _mm256_fmadd_pd(poly, s, set1(1.0 / 21.0));
  poly = _mm256_fmadd_pd(poly, s, set1(1.0 / 19.0));
  poly = _mm256_fmadd_pd(poly, s, set1(1.0 / 17.0));
  poly = _mm256_fmadd_pd(poly, s, set1(1.0 / 15.0));
  poly = _mm256_fmadd_pd(poly, s, set1(1.0 / 13.0));
  poly = _mm256_fmadd_pd(poly, s, set1(1.0 / 11.0));
  poly = _mm256_fmadd_pd(poly, s, set1(1.0 / 9.0));
  poly = _mm256_fmadd_pd(poly, s, set1(1.0 / 7.0));
  poly = _mm256_fmadd_pd(poly, s, set1(1.0 / 5.0));
  poly = _mm256_fmadd_pd(poly, s, set1(1.0 / 3.0));
  // log m = 2 f + 2 f s poly
  const __m256d two_f = _mm256_add_pd(f, f);
  const __m256d log_m = _mm256_fmadd_pd(_mm256_mul_pd(two_f, s), poly, two_f);
  return _mm256_fmadd_pd(e, set1(kLn2Hi), _mm256_fmadd_pd(e, set1(kLn2Lo), log_m));
}

// log(1 + x) for x > -1.
inline __m256d log1p_pd(__m256d x) {
  const __m256d u = _mm256_add_pd(set1(1.0), x);
  const __m256d um1 = _mm256_sub_pd(u, set1(1.0));
  const __m256d exact = _mm256_cmp_pd(um1, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d safe_um1 = _mm256_blendv_pd(um1, set1(1.0), exact);
  const __m256d res = _mm256_mul_pd(log_pd(u), _mm256_div_pd(x, safe_um1));
  return _mm256_blendv_pd(res, x, exact);
}

inline __m256d expm1_pd(__m256d x) {
  const __m256d small = _mm256_cmp_pd(abs_pd(x), set1(0.5), _CMP_LT_OQ);
  // x * sum_{k=0}^{15} x^k / (k+1)!
  __m256d poly = set1(1.0 / 20922789888000.0);  // 1/16!
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 1307674368000.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 87178291200.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 6227020800.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 479001600.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 39916800.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 3628800.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 362880.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 40320.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 5040.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 720.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 120.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 24.0));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0 / 6.0));
  poly = _mm256_fmadd_pd(poly, x, set1(0.5));
  poly = _mm256_fmadd_pd(poly, x, set1(1.0));
  const __m256d series = _mm256_mul_pd(x, poly);
  const __m256d direct = _mm256_sub_pd(exp_pd(x), set1(1.0));
  return _mm256_blendv_pd(direct, series, small);
}

// |x|^p for p >= 1, with 0^p = 0.
inline __m256d abs_pow_pd(__m256d a, __m256d p) {
  const __m256d zero = _mm256_cmp_pd(a, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d safe = _mm256_blendv_pd(a, set1(1.0), zero);
  const __m256d res = exp_pd(_mm256_mul_pd(p, log_pd(safe)));
  return _mm256_andnot_pd(zero, res);
}

inline double hsum(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace wmt::simd::avx2_math
