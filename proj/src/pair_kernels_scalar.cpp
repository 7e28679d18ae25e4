#include "fracpoin/pair_kernels.hpp"

namespace fracpoin::kern {

// Reference row kernel. The AVX2 variant mirrors this operation sequence
// exactly, lane = j mod 4.
void row_power_n2_scalar(const RowCtx& c, const double* mx, const double* my, const double* u,
                         size_t count, double acc[4], uint32_t* straddle, size_t* nstraddle) {
  const bool cut = c.R2 >= 0.0;
  for (size_t j = 0; j < count; ++j) {
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
