// AVX2 row kernel; compiled with -mavx2 only, selected at runtime.
// Mirrors row_power_n2_scalar op for op: sub, mul, add, div and sqrt are
// all correctly rounded, pow goes through the same libm call per lane, and
// lanes map to j mod 4, so results are bit-identical to the scalar path.

#include "fracpoin/pair_kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace fracpoin::kern {

namespace {

inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(v, mask);
}

inline __m256d kern_r2_vec(__m256d r2, const RowCtx& c) {
  if (c.e_kind == 0) {
    if (c.e_int == 0) return _mm256_set1_pd(1.0);
    __m256d acc = r2;
    for (int i = 1; i < c.e_int; ++i) acc = _mm256_mul_pd(acc, r2);
    return _mm256_div_pd(_mm256_set1_pd(1.0), acc);
  }
  if (c.e_kind == 1) {
    __m256d acc = _mm256_sqrt_pd(r2);
    for (int i = 0; i < c.e_int; ++i) acc = _mm256_mul_pd(acc, r2);
    return _mm256_div_pd(_mm256_set1_pd(1.0), acc);
  }
  alignas(32) double tmp[4];
  _mm256_store_pd(tmp, r2);
  for (int l = 0; l < 4; ++l) tmp[l] = std::pow(tmp[l], c.neg_e);
  return _mm256_load_pd(tmp);
}

inline __m256d du_pow_vec(__m256d du, const RowCtx& c) {
  if (c.p_kind == 0) return _mm256_mul_pd(du, du);
  alignas(32) double tmp[4];
  _mm256_store_pd(tmp, abs_pd(du));
  for (int l = 0; l < 4; ++l) tmp[l] = std::pow(tmp[l], c.p);
  return _mm256_load_pd(tmp);
}

}  // namespace

void row_power_n2_avx2(const RowCtx& c, const double* mx, const double* my, const double* u,
                       size_t count, double acc[4], uint32_t* straddle, size_t* nstraddle) {
  const bool cut = c.R2 >= 0.0;
  const __m256d xi = _mm256_set1_pd(c.xi);
  const __m256d yi = _mm256_set1_pd(c.yi);
  const __m256d ui = _mm256_set1_pd(c.ui);
  const __m256d near2 = _mm256_set1_pd(c.near2);
  const __m256d R2 = _mm256_set1_pd(c.R2);
  const __m256d hw = _mm256_set1_pd(c.halfwidth);
  const __m256d zero = _mm256_setzero_pd();
  __m256d vacc = _mm256_setzero_pd();

  size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(mx + j), xi);
    __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(my + j), yi);
    __m256d r2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    __m256d keep = _mm256_cmp_pd(r2, near2, _CMP_GE_OQ);
    if (cut) {
      __m256d ax = abs_pd(dx), ay = abs_pd(dy);
      __m256d gx = _mm256_max_pd(_mm256_sub_pd(ax, hw), zero);
      __m256d gy = _mm256_max_pd(_mm256_sub_pd(ay, hw), zero);
      __m256d r2min = _mm256_add_pd(_mm256_mul_pd(gx, gx), _mm256_mul_pd(gy, gy));
      __m256d sx = _mm256_add_pd(ax, hw);
      __m256d sy = _mm256_add_pd(ay, hw);
      __m256d r2max = _mm256_add_pd(_mm256_mul_pd(sx, sx), _mm256_mul_pd(sy, sy));
      __m256d strad = _mm256_and_pd(_mm256_cmp_pd(r2min, R2, _CMP_LT_OQ),
                                    _mm256_cmp_pd(R2, r2max, _CMP_LT_OQ));
      strad = _mm256_and_pd(strad, keep);
      int smask = _mm256_movemask_pd(strad);
      if (smask) {
        for (int l = 0; l < 4; ++l)
          if (smask & (1 << l)) straddle[(*nstraddle)++] = static_cast<uint32_t>(j + l);
      }
      keep = _mm256_andnot_pd(strad, keep);
      keep = _mm256_and_pd(keep, _mm256_cmp_pd(r2, R2, _CMP_LE_OQ));
    }
    __m256d du = _mm256_sub_pd(ui, _mm256_loadu_pd(u + j));
    __m256d term = _mm256_mul_pd(du_pow_vec(du, c), kern_r2_vec(r2, c));
    vacc = _mm256_add_pd(vacc, _mm256_and_pd(term, keep));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vacc);
  for (int l = 0; l < 4; ++l) acc[l] += lanes[l];

  // Tail in scalar, preserving the lane mapping.
  for (; j < count; ++j) {
    double dx = mx[j] - c.xi;
    double dy = my[j] - c.yi;
    double r2 = dx * dx + dy * dy;
    if (r2 < c.near2) continue;
    if (cut) {
      double ax = std::fabs(dx), ay = std::fabs(dy);
      double gx = ax - c.halfwidth;
      if (gx < 0.0) gx = 0.0;
      double gy = ay - c.halfwidth;
      if (gy < 0.0) gy = 0.0;
      double r2min = gx * gx + gy * gy;
      double sx = ax + c.halfwidth;
      double sy = ay + c.halfwidth;
      double r2max = sx * sx + sy * sy;
      if (r2min < c.R2 && c.R2 < r2max) {
        straddle[(*nstraddle)++] = static_cast<uint32_t>(j);
        continue;
      }
      if (!(r2 <= c.R2)) continue;
    }
    double du = c.ui - u[j];
    acc[j & 3] += du_pow(du, c) * kern_r2(r2, c);
  }
}

}  // namespace fracpoin::kern

#endif  // __AVX2__
