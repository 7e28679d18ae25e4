#include "fracpoin/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "fracpoin/util.hpp"

namespace fracpoin {

namespace {

// Grid cells whose closed boxes meet `box`.
std::vector<uint32_t> cells_meeting(const Grid& grid, const BoxR& box) {
  std::vector<uint32_t> out;
  const int n = grid.dim();
  std::array<int64_t, kMaxDim> lo{}, hi{};
  for (int k = 0; k < n; ++k) {
    Rat a = box.lo.x[k] / grid.h();
    Rat b = box.hi.x[k] / grid.h();
    lo[k] = a.num() >= 0 ? a.num() / a.den() : -((-a.num() + a.den() - 1) / a.den());
    hi[k] = b.num() >= 0 ? (b.num() + b.den() - 1) / b.den() : -((-b.num()) / b.den());
    if (Rat(hi[k]) == b) ++hi[k];  // include the touching layer
  }
  std::array<int64_t, kMaxDim> idx = lo;
  while (true) {
    int64_t j = grid.lookup(idx);
    if (j >= 0) out.push_back(static_cast<uint32_t>(j));
    int k = 0;
    while (k < n) {
      if (++idx[k] < hi[k]) break;
      idx[k] = lo[k];
      ++k;
    }
    if (k == n) break;
  }
  return out;
}

}  // namespace

std::shared_ptr<const CoveringGridCache> make_covering_grid_cache(CoveringPtr cov, GridPtr grid) {
  if (!cov || !grid) throw std::invalid_argument("covering cache: null input");
  auto cache = std::make_shared<CoveringGridCache>();
  cache->cov = cov;
  cache->grid = grid;
  const auto& c = *cov;
  const auto& g = *grid;
  const size_t m = c.size();
  const Rat cellvol = g.cell_weight_exact();

  cache->shadow_vol.resize(m);
  cache->shadow_frac.resize(m);
  cache->b_frags.resize(m);
  cache->b_vol.assign(m, Rat(0));
  cache->shadow_vol_d.resize(m);
  cache->b_vol_d.assign(m, 0.0);

  for (size_t t = 0; t < m; ++t) {
    auto boxes = c.shadow_boxes(static_cast<int>(t));
    cache->shadow_vol[t] = union_volume(boxes);
    cache->shadow_vol_d[t] = cache->shadow_vol[t].to_double();

    std::map<uint32_t, std::vector<BoxR>> clips;
    for (const auto& b : boxes) {
      for (uint32_t cell : cells_meeting(g, b)) {
        auto inter = g.cell_box(cell).intersection(b);
        if (!inter || inter->degenerate()) continue;
        clips[cell].push_back(*inter);
      }
    }
    auto& frac = cache->shadow_frac[t];
    frac.reserve(clips.size());
    for (auto& [cell, parts] : clips) {
      Rat vol(0);
      bool whole = false;
      for (const auto& pb : parts)
        if (pb.volume() == cellvol) {
          whole = true;
          break;
        }
      vol = whole ? cellvol : union_volume(parts);
      frac.emplace_back(cell, (vol / cellvol).to_double());
    }

    if (static_cast<int>(t) != c.root) {
      cache->b_vol[t] = c.B[t].volume();
      cache->b_vol_d[t] = cache->b_vol[t].to_double();
      for (uint32_t cell : cells_meeting(g, c.B[t])) {
        auto inter = g.cell_box(cell).intersection(c.B[t]);
        if (!inter || inter->degenerate()) continue;
        cache->b_frags[t].push_back({cell, *inter, inter->volume().to_double()});
      }
    }
  }

  // V ownership of grid cells.
  cache->owner.assign(g.size(), -1);
  for (size_t t = 0; t < m; ++t) {
    for (uint32_t cell : cells_meeting(g, c.V[t])) {
      if (c.V[t].contains_box(g.cell_box(cell))) {
        if (cache->owner[cell] >= 0)
          throw std::runtime_error("covering cache: grid cell inside two base pieces");
        cache->owner[cell] = static_cast<int32_t>(t);
      }
    }
  }
  for (size_t i = 0; i < g.size(); ++i)
    if (cache->owner[i] >= 0) ++cache->covered_cells;
  return cache;
}

BumpField hardy_apply(const CoveringGridCache& cache, const Field& g) {
  if (g.grid.get() != cache.grid.get())
    throw std::invalid_argument("hardy_apply: field grid does not match the cache");
  BumpField out;
  out.cache = &cache;
  out.coeff.assign(cache.cov->size(), 0.0);
  const double w = cache.grid->cell_weight();
  for (size_t t = 0; t < cache.cov->size(); ++t) {
    if (static_cast<int>(t) == cache.cov->root) continue;
    std::vector<double> terms;
    terms.reserve(cache.shadow_frac[t].size());
    for (const auto& [cell, frac] : cache.shadow_frac[t])
      terms.push_back(std::fabs(g.v[cell]) * frac);
    out.coeff[t] = pairwise_sum(terms) * w / cache.shadow_vol_d[t];
  }
  return out;
}

double field_lq_norm(const Field& g, double q, double beta, const BoundarySet* F) {
  if (std::isinf(q)) {
    if (beta > 0.0) throw std::invalid_argument("field_lq_norm: weighted sup norm not supported");
    return g.max_abs();
  }
  std::vector<double> dF;
  if (beta > 0.0) {
    if (F == nullptr) throw std::invalid_argument("field_lq_norm: beta > 0 requires F");
    dF = distances_to(*g.grid, *F);
  }
  std::vector<double> terms(g.v.size());
  for (size_t i = 0; i < g.v.size(); ++i) {
    double t = std::pow(std::fabs(g.v[i]), q);
    if (beta > 0.0) t *= std::pow(dF[i], -q * beta);
    terms[i] = t;
  }
  return std::pow(pairwise_sum(terms) * g.grid->cell_weight(), 1.0 / q);
}

double bump_lq_norm(const BumpField& tg, double q, double beta, const BoundarySet* F) {
  const auto& cache = *tg.cache;
  if (std::isinf(q)) {
    if (beta > 0.0) throw std::invalid_argument("bump_lq_norm: weighted sup norm not supported");
    double m = 0;
    for (size_t t = 0; t < tg.coeff.size(); ++t)
      if (static_cast<int>(t) != cache.cov->root) m = std::max(m, std::fabs(tg.coeff[t]));
    return m;
  }
  std::vector<double> terms;
  for (size_t t = 0; t < tg.coeff.size(); ++t) {
    if (static_cast<int>(t) == cache.cov->root || tg.coeff[t] == 0.0) continue;
    double cq = std::pow(std::fabs(tg.coeff[t]), q);
    if (beta > 0.0) {
      if (F == nullptr) throw std::invalid_argument("bump_lq_norm: beta > 0 requires F");
      for (const auto& bf : cache.b_frags[t]) {
        double dF = F->distance(bf.box.center());
        terms.push_back(cq * std::pow(dF, -q * beta) * bf.vol);
      }
    } else {
      terms.push_back(cq * cache.b_vol_d[t]);
    }
  }
  return std::pow(pairwise_sum(terms), 1.0 / q);
}

HardyProbeReport hardy_norm_probe(const CoveringGridCache& cache, double q, double beta,
                                  const BoundarySet* F, int trials, uint64_t seed) {
  if (!(q > 1.0)) throw std::invalid_argument("hardy_norm_probe: q > 1 required");
  if (trials < 1) throw std::invalid_argument("hardy_norm_probe: trials >= 1 required");
  HardyProbeReport rep;
  rep.q = q;
  rep.beta = beta;
  rep.trials = trials;
  rep.seed = seed;

  const auto& cov = *cache.cov;
  const int n = cov.n;
  if (std::isinf(q)) {
    rep.bound = 2.0;
  } else {
    rep.bound = 2.0 * std::pow(q * static_cast<double>(cov.overlap_N) / (q - 1.0), 1.0 / q);
  }
  if (beta > 0.0) {
    if (cov.kind != TreeCovering::Kind::John)
      throw std::invalid_argument("hardy_norm_probe: weighted probes need a john covering");
    double K = boman_constant(cov).K_d;
    rep.c2 = std::pow(3.0 * K * std::sqrt(static_cast<double>(n)), beta);
  }

  Rng rng(seed);
  auto grid = cache.grid;
  for (int trial = 0; trial < trials; ++trial) {
    Field g;
    g.grid = grid;
    g.v.assign(grid->size(), 0.0);
    int kind = trial % 3;
    if (kind == 0) {
      for (auto& x : g.v) x = rng.uniform01();
    } else if (kind == 1) {
      g.v[rng.below(g.v.size())] = 1.0;  // single-cell spike
    } else {
      // indicator of a random subtree's shadow support
      size_t t = rng.below(cov.size());
      for (const auto& [cell, frac] : cache.shadow_frac[t])
        if (frac > 0.5) g.v[cell] = 1.0;
      if (g.max_abs() == 0.0) g.v[rng.below(g.v.size())] = 1.0;
    }
    BumpField tg = hardy_apply(cache, g);
    double num = bump_lq_norm(tg, q, beta, F);
    double den = field_lq_norm(g, q, beta, F);
    if (den == 0.0) continue;
    rep.max_ratio = std::max(rep.max_ratio, num / den);
  }
  rep.pass = rep.max_ratio <= rep.bound * rep.c2;
  return rep;
}

}  // namespace fracpoin
