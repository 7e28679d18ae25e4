#pragma once

// Finite decomposition of a zero-mean function into per-node parts, each
// supported in U_t and each with zero mean: for every node the subtree
// integral S_t is pushed down to the transfer cube B_t as a uniform bump,
//
//   g_t = g chi_{V_t} - S_t chi_{B_t}/|B_t| + sum_{s_p = t} S_s chi_{B_s}/|B_s|,
//
// which telescopes to sum g_t = g and keeps the pointwise bounds
//   |g_t| <= |g| + (|W_s|/|B_s|) Tg   on B_s with s = t or s_p = t,
//   |g_t| <= |g|                      elsewhere,
// since |S_s| <= integral of |g| over W_s. Parts are stored as grid values
// plus exact bump terms, so support and zero mean hold at any resolution.

#include <vector>

#include "fracpoin/hardy.hpp"

namespace fracpoin {

struct DecompPart {
  int32_t node = -1;
  std::vector<std::pair<uint32_t, double>> cells;   // owned cells, value of g there
  std::vector<std::pair<int32_t, double>> bumps;    // (s, amplitude a): a chi_{B_s}/|B_s|
};

struct DecompositionResult {
  std::shared_ptr<const CoveringGridCache> cache;
  std::vector<DecompPart> parts;      // only nodes with a nonzero part
  std::vector<double> subtree_integral;  // S_t per node
  double residual_mean = 0;           // uniform shift removed before decomposing
  double uncovered_mass = 0;          // |g| mass on cells outside every V_t

  // Grid projection of one part (integral-preserving cell averages).
  std::vector<double> project_part(size_t part_index) const;
};

// Requires the grid cells to nest inside the base pieces V_t and the mean
// of g over the covered region to vanish within 1e-12 * ||g||_inf * |Omega|.
DecompositionResult orthogonal_decompose(const std::shared_ptr<const CoveringGridCache>& cache,
                                         const Field& g);

struct DecompReport {
  bool sum_ok = false;        // sum_t g_t == g on covered cells
  bool support_ok = false;    // supp(g_t) inside U_t, exact boxes
  bool means_ok = false;      // every part integrates to zero
  bool bounds_ok = false;     // (P02)/(P01) on every fragment
  double worst_sum_residual = 0;
  double worst_mean_residual = 0;
  double min_bound_slack = 0;  // min of rhs - |g_t| over all checked fragments
  int bound_violations = 0;
  std::vector<std::string> failures;

  bool pass() const { return sum_ok && support_ok && means_ok && bounds_ok; }
};

DecompReport verify_decomposition(const CoveringGridCache& cache, const Field& g,
                                  const DecompositionResult& result);

}  // namespace fracpoin
