#pragma once

// The Hardy-type averaging operator over a tree covering: on each transfer
// cube B_t it takes the mean of |g| over the shadow W_t. Values of Tg are
// carried as (B_t, coefficient) bumps rather than grid samples, because the
// transfer cubes are not grid-aligned; region integrals against grid cells
// use exact cell/box overlap fractions.

#include <memory>
#include <vector>

#include "fracpoin/covering.hpp"
#include "fracpoin/field.hpp"

namespace fracpoin {

// Geometry shared by the Hardy operator and the orthogonal decomposition:
// exact shadow volumes, per-cell shadow overlap fractions, transfer-cube
// fragments and the V_t ownership of grid cells.
struct CoveringGridCache {
  CoveringPtr cov;
  GridPtr grid;

  std::vector<Rat> shadow_vol;
  std::vector<double> shadow_vol_d;
  // per node: (cell, fraction of the cell inside W_t)
  std::vector<std::vector<std::pair<uint32_t, double>>> shadow_frac;

  struct BFrag {
    uint32_t cell;
    BoxR box;
    double vol;
  };
  std::vector<std::vector<BFrag>> b_frags;  // per node, empty at the root
  std::vector<Rat> b_vol;
  std::vector<double> b_vol_d;

  // owner[c] = node whose V contains cell c, or -1 (uncovered collar).
  std::vector<int32_t> owner;
  size_t covered_cells = 0;
};

std::shared_ptr<const CoveringGridCache> make_covering_grid_cache(CoveringPtr cov, GridPtr grid);

struct BumpField {
  const CoveringGridCache* cache = nullptr;
  std::vector<double> coeff;  // per node; root slot unused

  double value_on(int node) const { return coeff[node]; }
};

// Tg with exact shadow integrals of |g|.
BumpField hardy_apply(const CoveringGridCache& cache, const Field& g);

// L^q norms in L^q(Omega, d_F^{-q beta}); F may be null when beta == 0.
double field_lq_norm(const Field& g, double q, double beta, const BoundarySet* F);
double bump_lq_norm(const BumpField& tg, double q, double beta, const BoundarySet* F);

struct HardyProbeReport {
  double q = 2;
  double beta = 0;
  int trials = 0;
  double max_ratio = 0;
  double bound = 0;  // 2 (qN/(q-1))^{1/q}
  double c2 = 1;     // (3 K sqrt(n))^beta for the weighted case
  bool pass = false;
  uint64_t seed = 0;
};

// Random nonnegative probes of ||Tg||/||g|| in L^q(omega^{-q}).
HardyProbeReport hardy_norm_probe(const CoveringGridCache& cache, double q, double beta,
                                  const BoundarySet* F, int trials, uint64_t seed);

}  // namespace fracpoin
