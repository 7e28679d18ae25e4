#pragma once

// Inner loops of the cell-pair quadrature: for a fixed source cell i,
// accumulate  sum_j |u_i - u_j|^p * r_ij^(-alpha)  over far cells j, with an
// optional ball cutoff r2 <= R2 and detection of cells straddling the ball
// boundary.
//
// Two backends implement the same row contract: a scalar reference and an
// AVX2 variant selected at runtime. Both use the identical operation
// sequence (mul/add/div/sqrt are correctly rounded, pow is the same libm
// call, and the build disables FMA contraction), and both accumulate into
// four lane-striped partials with lane = j mod 4, so their results are
// bit-identical. The equivalence suite asserts exactly that.

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace fracpoin::kern {

enum class Backend { Scalar, Avx2 };

Backend active_backend();       // honors FRACPOIN_SIMD=scalar|avx2
const char* backend_name();
bool avx2_supported();

struct RowCtx {
  double xi = 0, yi = 0;  // midpoint of the source cell (n == 2 path)
  double ui = 0;
  double near2 = 0;       // j with r2 < near2 are skipped (handled by recursion)
  double R2 = -1;         // ball cutoff; negative means none
  double halfwidth = 0;   // half side of the target cells, for straddle tests

  int p_kind = 0;         // 0: p == 2, 1: general pow
  double p = 2;
  int e_kind = 0;         // kern = r2^-e; 0: integer e, 1: e = e_int + 1/2, 2: pow
  int e_int = 1;
  double neg_e = -1;      // -e, used by the pow path
};

// |du|^p and r2^-e with a fixed operation sequence shared by every backend.
inline double du_pow(double du, const RowCtx& c) {
  if (c.p_kind == 0) return du * du;
  return std::pow(std::fabs(du), c.p);
}

inline double kern_r2(double r2, const RowCtx& c) {
  if (c.e_kind == 0) {
    if (c.e_int == 0) return 1.0;
    double acc = r2;
    for (int i = 1; i < c.e_int; ++i) acc = acc * r2;
    return 1.0 / acc;
  }
  if (c.e_kind == 1) {
    double acc = std::sqrt(r2);
    for (int i = 0; i < c.e_int; ++i) acc = acc * r2;
    return 1.0 / acc;
  }
  return std::pow(r2, c.neg_e);
}

inline void classify_exponents(double p, double alpha, RowCtx& c) {
  c.p = p;
  c.p_kind = (p == 2.0) ? 0 : 1;
  double e = 0.5 * alpha;
  c.neg_e = -e;
  double fl = std::floor(e);
  if (e == fl && fl >= 0 && fl <= 8) {
    c.e_kind = 0;
    c.e_int = static_cast<int>(fl);
  } else if (e - fl == 0.5 && fl >= 0 && fl <= 8) {
    c.e_kind = 1;
    c.e_int = static_cast<int>(fl);
  } else {
    c.e_kind = 2;
  }
}

// Accumulates sum_j du_pow(ui - u[j]) * kern_r2(r2_ij) over eligible far j
// into acc[j mod 4]; straddling j are reported, not accumulated. The caller
// owns any per-row factors (cell weight, kernel x-factors).
using RowFn = void (*)(const RowCtx&, const double* mx, const double* my, const double* u,
                       size_t count, double acc[4], uint32_t* straddle, size_t* nstraddle);

RowFn row_power_n2();  // active backend
RowFn row_power_n2_backend(Backend b);

inline double reduce4(const double acc[4]) { return (acc[0] + acc[1]) + (acc[2] + acc[3]); }

}  // namespace fracpoin::kern
