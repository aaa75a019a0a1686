#include <immintrin.h>

#include <array>

#include "avx2_math.hpp"
#include "wmt/simd/kernels.hpp"

namespace wmt::simd::avx2 {

using namespace avx2_math;

namespace {

struct Lanes {
  __m256d psi, t, w;
};

// Loads four points starting at q; lanes past `n` are padded with psi = t =
// w = 0, which contribute nothing.
inline Lanes load(std::span<const double> psi, std::span<const double> t,
                  std::span<const double> w, std::size_t q, std::size_t n) {
  if (q + 4 <= n) {
    return {_mm256_loadu_pd(psi.data() + q), _mm256_loadu_pd(t.data() + q), _mm256_loadu_pd(w.data() + q)};
  }
  alignas(32) std::array<double, 4> a{}, b{}, c{};
  for (std::size_t k = 0; q + k < n; ++k) {
    a[k] = psi[q + k];
    b[k] = t[q + k];
    c[k] = w[q + k];
  }
  return {_mm256_load_pd(a.data()), _mm256_load_pd(b.data()), _mm256_load_pd(c.data())};
}

inline void store(std::span<double> out, std::size_t q, std::size_t n, __m256d v) {
  if (q + 4 <= n) {
    _mm256_storeu_pd(out.data() + q, v);
    return;
  }
  alignas(32) std::array<double, 4> tmp{};
  _mm256_store_pd(tmp.data(), v);
  for (std::size_t k = 0; q + k < n; ++k) out[q + k] = tmp[k];
}

}  // namespace

double exp_power_sum(std::span<const double> psi, std::span<const double> t,
                     std::span<const double> w, double p, std::span<double> terms,
                     std::span<double> slopes) {
  const std::size_t n = psi.size();
  const bool want_terms = !terms.empty();
  const bool want_slopes = !slopes.empty();
  const __m256d vp = set1(p);
  const __m256d sign_mask = set1(-0.0);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t q = 0; q < n; q += 4) {
    const Lanes in = load(psi, t, w, q, n);
    const __m256d a = abs_pd(in.psi);
    const __m256d power = abs_pow_pd(a, vp);
    const __m256d term = _mm256_mul_pd(in.w, exp_pd(_mm256_sub_pd(power, in.t)));
    acc = _mm256_add_pd(acc, term);
    if (want_terms) store(terms, q, n, term);
    if (want_slopes) {
      const __m256d zero = _mm256_cmp_pd(a, _mm256_setzero_pd(), _CMP_EQ_OQ);
      const __m256d safe_a = _mm256_blendv_pd(a, set1(1.0), zero);
      __m256d d = _mm256_mul_pd(_mm256_mul_pd(vp, _mm256_div_pd(power, safe_a)), term);
      d = _mm256_andnot_pd(zero, d);
      d = _mm256_xor_pd(d, _mm256_and_pd(in.psi, sign_mask));
      store(slopes, q, n, d);
    }
  }
  return hsum(acc);
}

double exp_power_increment(std::span<const double> psi, std::span<const double> delta,
                           std::span<const double> t, std::span<const double> w, double p) {
  const std::size_t n = psi.size();
  const __m256d vp = set1(p);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t q = 0; q < n; q += 4) {
    const Lanes in = load(psi, t, w, q, n);
    const Lanes d_in = load(delta, t, w, q, n);
    const __m256d dpsi = d_in.psi;
    const __m256d a = abs_pd(in.psi);
    const __m256d power = abs_pow_pd(a, vp);

    const __m256d nonzero = _mm256_cmp_pd(in.psi, _mm256_setzero_pd(), _CMP_NEQ_OQ);
    const __m256d safe_psi = _mm256_blendv_pd(set1(1.0), in.psi, nonzero);
    const __m256d ratio = _mm256_and_pd(nonzero, _mm256_div_pd(dpsi, safe_psi));
    const __m256d use_log = _mm256_and_pd(nonzero, _mm256_cmp_pd(ratio, set1(-0.5), _CMP_GT_OQ));
    const __m256d safe_ratio = _mm256_max_pd(ratio, set1(-0.5));
    const __m256d dpow_log = _mm256_mul_pd(power, expm1_pd(_mm256_mul_pd(vp, log1p_pd(safe_ratio))));
    const __m256d dpow_direct =
        _mm256_sub_pd(abs_pow_pd(abs_pd(_mm256_add_pd(in.psi, dpsi)), vp), power);
    const __m256d dpow = _mm256_blendv_pd(dpow_direct, dpow_log, use_log);

    const __m256d term = _mm256_mul_pd(_mm256_mul_pd(in.w, exp_pd(_mm256_sub_pd(power, in.t))), expm1_pd(dpow));
    acc = _mm256_add_pd(acc, term);
  }
  return hsum(acc);
}

}  // namespace wmt::simd::avx2
