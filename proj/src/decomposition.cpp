#include "fracpoin/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fracpoin/util.hpp"

namespace fracpoin {

std::vector<double> DecompositionResult::project_part(size_t part_index) const {
  const auto& part = parts.at(part_index);
  const Grid& grid = *cache->grid;
  std::vector<double> out(grid.size(), 0.0);
  for (const auto& [cell, val] : part.cells) out[cell] = val;
  const double wcell = grid.cell_weight();
  for (const auto& [s, amp] : part.bumps) {
    double density = amp / cache->b_vol_d[s];
    for (const auto& bf : cache->b_frags[s]) out[bf.cell] += density * bf.vol / wcell;
  }
  return out;
}

DecompositionResult orthogonal_decompose(const std::shared_ptr<const CoveringGridCache>& cache_ptr,
                                         const Field& g) {
  const auto& cache = *cache_ptr;
  if (g.grid.get() != cache.grid.get())
    throw std::invalid_argument("orthogonal_decompose: field grid does not match the cache");
  if (cache.covered_cells == 0)
    throw std::invalid_argument("orthogonal_decompose: grid incompatible with the covering");
  const auto& cov = *cache.cov;
  const Grid& grid = *cache.grid;
  const double wcell = grid.cell_weight();

  DecompositionResult res;
  res.cache = cache_ptr;

  // Zero-mean precondition over the covered region, then remove the
  // quadrature residual uniformly.
  std::vector<double> mass_terms;
  double uncovered = 0;
  for (size_t c = 0; c < grid.size(); ++c) {
    if (cache.owner[c] >= 0)
      mass_terms.push_back(g.v[c]);
    else
      uncovered += std::fabs(g.v[c]) * wcell;
  }
  res.uncovered_mass = uncovered;
  double mean_mass = pairwise_sum(mass_terms) * wcell;
  double ginf = g.max_abs();
  double vol = grid.domain().volume().to_double();
  if (std::fabs(mean_mass) > 1e-12 * std::max(ginf, 1e-300) * vol)
    throw std::invalid_argument("orthogonal_decompose: field mean exceeds tolerance");
  res.residual_mean = mean_mass / (static_cast<double>(cache.covered_cells) * wcell);

  auto gt = [&](uint32_t c) { return g.v[c] - res.residual_mean; };

  // Per-node owned cells, in grid order.
  std::vector<std::vector<uint32_t>> owned(cov.size());
  for (size_t c = 0; c < grid.size(); ++c)
    if (cache.owner[c] >= 0) owned[cache.owner[c]].push_back(static_cast<uint32_t>(c));

  // Subtree integrals bottom-up.
  res.subtree_integral.assign(cov.size(), 0.0);
  for (size_t pos = cov.size(); pos-- > 0;) {
    int32_t t = cov.dfs_order[pos];
    std::vector<double> terms;
    terms.reserve(owned[t].size() + cov.children[t].size());
    for (uint32_t c : owned[t]) terms.push_back(gt(c) * wcell);
    for (int32_t s : cov.children[t]) terms.push_back(res.subtree_integral[s]);
    res.subtree_integral[t] = pairwise_sum(terms);
  }

  for (size_t t = 0; t < cov.size(); ++t) {
    DecompPart part;
    part.node = static_cast<int32_t>(t);
    for (uint32_t c : owned[t]) {
      double v = gt(c);
      if (v != 0.0) part.cells.emplace_back(c, v);
    }
    if (static_cast<int>(t) != cov.root && res.subtree_integral[t] != 0.0)
      part.bumps.emplace_back(static_cast<int32_t>(t), -res.subtree_integral[t]);
    for (int32_t s : cov.children[t])
      if (res.subtree_integral[s] != 0.0)
        part.bumps.emplace_back(s, res.subtree_integral[s]);
    if (!part.cells.empty() || !part.bumps.empty()) res.parts.push_back(std::move(part));
  }
  return res;
}

DecompReport verify_decomposition(const CoveringGridCache& cache, const Field& g,
                                  const DecompositionResult& result) {
  DecompReport rep;
  const auto& cov = *cache.cov;
  const Grid& grid = *cache.grid;
  const double wcell = grid.cell_weight();
  const double ginf = g.max_abs();
  const double tol = 1e-12 * std::max(ginf, 1e-300);

  auto gt = [&](uint32_t c) { return g.v[c] - result.residual_mean; };

  // (1) reconstruction: the owner carries g on its cells, and the two bump
  // amplitudes of every B_s cancel exactly.
  rep.sum_ok = true;
  {
    std::vector<double> acc(grid.size(), 0.0);
    std::vector<double> bump_net(cov.size(), 0.0);
    for (const auto& part : result.parts) {
      for (const auto& [cell, val] : part.cells) acc[cell] += val;
      for (const auto& [s, amp] : part.bumps) bump_net[s] += amp;
    }
    for (size_t c = 0; c < grid.size(); ++c) {
      if (cache.owner[c] < 0) continue;
      double resid = std::fabs(acc[c] - gt(static_cast<uint32_t>(c)));
      rep.worst_sum_residual = std::max(rep.worst_sum_residual, resid);
      if (resid > tol) rep.sum_ok = false;
    }
    for (size_t s = 0; s < cov.size(); ++s) {
      rep.worst_sum_residual = std::max(rep.worst_sum_residual, std::fabs(bump_net[s]) /
                                                                    std::max(cache.b_vol_d[s], 1.0));
      if (bump_net[s] != 0.0) rep.sum_ok = false;
    }
    if (!rep.sum_ok) rep.failures.push_back("reconstruction residual exceeds tolerance");
  }

  // (2) support containment, exact boxes.
  rep.support_ok = true;
  for (const auto& part : result.parts) {
    const BoxR& U = cov.U[part.node];
    for (const auto& [cell, val] : part.cells) {
      (void)val;
      if (cache.owner[cell] != part.node || !U.contains_box(grid.cell_box(cell))) {
        rep.support_ok = false;
        rep.failures.push_back("part " + std::to_string(part.node) +
                               " carries a cell outside U_t");
        break;
      }
    }
    for (const auto& [s, amp] : part.bumps) {
      (void)amp;
      bool own = s == part.node;
      bool child = cov.parent[s] == part.node;
      if ((!own && !child) || !U.contains_box(cov.B[s])) {
        rep.support_ok = false;
        rep.failures.push_back("part " + std::to_string(part.node) +
                               " carries a bump outside U_t");
        break;
      }
    }
  }

  // (3) zero means.
  rep.means_ok = true;
  double vol = grid.domain().volume().to_double();
  for (const auto& part : result.parts) {
    std::vector<double> terms;
    for (const auto& [cell, val] : part.cells) terms.push_back(val * wcell);
    for (const auto& [s, amp] : part.bumps) {
      (void)s;
      terms.push_back(amp);
    }
    double m = std::fabs(pairwise_sum(terms));
    rep.worst_mean_residual = std::max(rep.worst_mean_residual, m);
    if (m > tol * vol) {
      rep.means_ok = false;
      rep.failures.push_back("part " + std::to_string(part.node) + " has nonzero mean");
    }
  }

  // (P02)/(P01) on every fragment where some part is nonzero.
  rep.bounds_ok = true;
  rep.min_bound_slack = std::numeric_limits<double>::infinity();
  Field gshift;
  gshift.grid = result.cache->grid;
  gshift.v.resize(g.v.size());
  for (size_t c = 0; c < g.v.size(); ++c) gshift.v[c] = gt(static_cast<uint32_t>(c));
  BumpField tg = hardy_apply(cache, gshift);

  auto check = [&](double lhs, double rhs) {
    double slack = rhs - lhs;
    rep.min_bound_slack = std::min(rep.min_bound_slack, slack);
    if (lhs > rhs * (1.0 + 1e-9) + tol) {
      rep.bounds_ok = false;
      ++rep.bound_violations;
    }
  };

  for (const auto& part : result.parts) {
    // cells without bump overlap satisfy |g_t| = |g| <= |g| by construction;
    // the binding checks happen on the bump fragments.
    std::map<uint32_t, double> cellval(part.cells.begin(), part.cells.end());
    for (const auto& [s, amp] : part.bumps) {
      double ratio = cache.shadow_vol_d[s] / cache.b_vol_d[s];
      double density = amp / cache.b_vol_d[s];
      for (const auto& bf : cache.b_frags[s]) {
        double base = 0;
        if (auto it = cellval.find(bf.cell); it != cellval.end()) base = it->second;
        double lhs = std::fabs(base + density);
        double rhs = std::fabs(gt(bf.cell)) + ratio * tg.coeff[s];
        check(lhs, rhs);
      }
    }
  }
  if (!rep.bounds_ok) rep.failures.push_back("pointwise decomposition bounds violated");
  return rep;
}

}  // namespace fracpoin
