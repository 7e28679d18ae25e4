#include "fracpoin/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracpoin/box_ops.hpp"

namespace fracpoin {

namespace {

struct Builder {
  const RectilinearDomain& dom;
  int max_gen;
  std::vector<Cube> out;
  std::vector<int> out_gen;
  Rat uncovered = Rat(0);
  Rat cs;

  // Number of domain cells covered by a lattice-aligned cube with side
  // >= cell_size (corner on the cell lattice).
  enum class Cover { Outside, Partial, Inside };

  Cover classify(const Cube& q) const {
    if (q.side >= cs) {
      CellIndex lo{}, hi{};
      for (int k = 0; k < dom.dim(); ++k) {
        Rat a = q.corner.x[k] / cs;
        Rat b = (q.corner.x[k] + q.side) / cs;
        lo[k] = a.num() / a.den();  // exact: lattice-aligned
        hi[k] = b.num() / b.den();
      }
      int64_t total = 1, present = 0;
      for (int k = 0; k < dom.dim(); ++k) total *= (hi[k] - lo[k]);
      CellIndex idx = lo;
      while (true) {
        CellIndex c{};
        for (int k = 0; k < dom.dim(); ++k) c[k] = idx[k];
        if (dom.has_cell(c)) ++present;
        int k = 0;
        while (k < dom.dim()) {
          if (++idx[k] < hi[k]) break;
          idx[k] = lo[k];
          ++k;
        }
        if (k == dom.dim()) break;
      }
      if (present == 0) return Cover::Outside;
      if (present == total) return Cover::Inside;
      return Cover::Partial;
    }
    // Small cube sits inside a single cell.
    CellIndex c{};
    for (int k = 0; k < dom.dim(); ++k) {
      Rat a = q.corner.x[k] / cs;
      c[k] = a.num() >= 0 ? a.num() / a.den() : -((-a.num() + a.den() - 1) / a.den());
    }
    return dom.has_cell(c) ? Cover::Inside : Cover::Outside;
  }

  Rat covered_volume(const Cube& q) const {
    if (q.side >= cs) {
      CellIndex lo{}, hi{};
      for (int k = 0; k < dom.dim(); ++k) {
        Rat a = q.corner.x[k] / cs;
        Rat b = (q.corner.x[k] + q.side) / cs;
        lo[k] = a.num() / a.den();
        hi[k] = b.num() / b.den();
      }
      int64_t present = 0;
      CellIndex idx = lo;
      while (true) {
        CellIndex c{};
        for (int k = 0; k < dom.dim(); ++k) c[k] = idx[k];
        if (dom.has_cell(c)) ++present;
        int k = 0;
        while (k < dom.dim()) {
          if (++idx[k] < hi[k]) break;
          idx[k] = lo[k];
          ++k;
        }
        if (k == dom.dim()) break;
      }
      return pow_int(cs, dom.dim()) * Rat(present);
    }
    return pow_int(q.side, dom.dim());
  }

  void recurse(const Cube& q, int gen) {
    Cover cov = classify(q);
    if (cov == Cover::Outside) return;
    if (cov == Cover::Inside) {
      Rat d2 = dom.boundary_sq_dist_box(q.box());
      if (q.sq_diam() <= d2) {
        out.push_back(q);
        out_gen.push_back(gen);
        return;
      }
    }
    if (gen >= max_gen) {
      uncovered += covered_volume(q);
      return;
    }
    Rat half = q.side / Rat(2);
    int n = q.n;
    for (int child = 0; child < (1 << n); ++child) {
      PointR c = q.corner;
      for (int k = 0; k < n; ++k)
        if (child & (1 << k)) c.x[k] += half;
      recurse(Cube::make(c, half), gen + 1);
    }
  }
};

}  // namespace

WhitneyPtr whitney_decompose(DomainPtr domain, int max_generation) {
  if (!domain) throw std::invalid_argument("whitney_decompose: null domain");
  if (max_generation < 0) throw std::invalid_argument("whitney_decompose: max_generation < 0");

  const auto& dom = *domain;
  BoxR bb = dom.bounding_box();
  Rat cs = dom.cell_size();
  // Smallest lattice-aligned power-of-two multiple of cell_size covering the
  // bounding box, anchored at its min corner.
  Rat extent(0);
  for (int k = 0; k < dom.dim(); ++k) extent = max(extent, bb.side(k));
  Rat side = cs;
  int root_gen = 0;
  while (side < extent) {
    side *= Rat(2);
    --root_gen;
  }
  Cube root = Cube::make(bb.lo, side);

  Builder b{dom, max_generation, {}, {}, Rat(0), cs};
  b.recurse(root, root_gen);

  auto dec = std::make_shared<WhitneyDecomposition>();
  dec->domain = std::move(domain);
  dec->max_generation = max_generation;

  // Canonical order: coarse to fine, then lexicographic corner.
  std::vector<size_t> order(b.out.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t c) {
    if (b.out_gen[a] != b.out_gen[c]) return b.out_gen[a] < b.out_gen[c];
    for (int k = 0; k < dom.dim(); ++k) {
      if (b.out[a].corner.x[k] != b.out[c].corner.x[k])
        return b.out[a].corner.x[k] < b.out[c].corner.x[k];
    }
    return false;
  });
  dec->cubes.reserve(order.size());
  dec->generation.reserve(order.size());
  for (size_t i : order) {
    dec->cubes.push_back(b.out[i]);
    dec->generation.push_back(b.out_gen[i]);
  }
  dec->uncovered = b.uncovered;

  std::vector<BoxR> boxes;
  boxes.reserve(dec->cubes.size());
  for (const auto& q : dec->cubes) boxes.push_back(q.box());
  dec->neighbors.assign(dec->cubes.size(), {});
  for (auto [i, j] : touching_pairs(boxes)) {
    dec->neighbors[i].push_back(j);
    dec->neighbors[j].push_back(i);
  }
  return dec;
}

std::vector<Cube> expand_cubes(const WhitneyDecomposition& dec) {
  std::vector<Cube> out;
  out.reserve(dec.cubes.size());
  for (const auto& q : dec.cubes) out.push_back(q.dilated(Rat(9, 8)));
  return out;
}

WhitneyReport verify_whitney(const WhitneyDecomposition& dec) {
  WhitneyReport rep;
  const auto& dom = *dec.domain;
  const int n = dom.dim();
  rep.uncovered = dec.uncovered;

  std::vector<BoxR> boxes;
  boxes.reserve(dec.cubes.size());
  for (const auto& q : dec.cubes) boxes.push_back(q.box());

  auto witness = interiors_intersect_witness(boxes);
  rep.disjoint_interiors = !witness.has_value();
  if (witness)
    rep.failures.push_back("cubes " + std::to_string(witness->first) + " and " +
                           std::to_string(witness->second) + " have intersecting interiors");

  Rat total(0);
  for (const auto& q : dec.cubes) total += pow_int(q.side, n);
  rep.volume_identity = (total + dec.uncovered == dom.volume());
  if (!rep.volume_identity) rep.failures.push_back("volume identity violated");

  rep.contained = true;
  rep.size_bounds = true;
  double lo_ratio = std::numeric_limits<double>::infinity(), hi_ratio = 0;
  for (size_t i = 0; i < dec.cubes.size(); ++i) {
    const Cube& q = dec.cubes[i];
    Rat d2 = dom.boundary_sq_dist_box(q.box());
    Rat diam2 = q.sq_diam();
    if (!(diam2 <= d2 && d2 <= Rat(16) * diam2)) {
      if (rep.size_bounds)
        rep.failures.push_back("size bound fails at cube " + std::to_string(i));
      rep.size_bounds = false;
    }
    double r = std::sqrt(d2.to_double() / diam2.to_double());
    lo_ratio = std::min(lo_ratio, r);
    hi_ratio = std::max(hi_ratio, r);
    // containment: every midpoint cell of the cube belongs to the domain
    Builder b{dom, 0, {}, {}, Rat(0), dom.cell_size()};
    if (b.classify(q) != Builder::Cover::Inside) {
      if (rep.contained)
        rep.failures.push_back("cube " + std::to_string(i) + " leaves the closed domain");
      rep.contained = false;
    }
  }
  rep.worst_dist_over_diam_lo = lo_ratio;
  rep.worst_dist_over_diam_hi = hi_ratio;

  rep.neighbor_ratios = true;
  rep.neighbor_count = true;
  int64_t cap = 1;
  for (int k = 0; k < n; ++k) cap *= 12;
  double worst_nr = 1;
  for (size_t i = 0; i < dec.cubes.size(); ++i) {
    if (static_cast<int64_t>(dec.neighbors[i].size()) > cap) {
      if (rep.neighbor_count)
        rep.failures.push_back("cube " + std::to_string(i) + " exceeds 12^n neighbors");
      rep.neighbor_count = false;
    }
    rep.max_neighbors = std::max(rep.max_neighbors, static_cast<int>(dec.neighbors[i].size()));
    for (int32_t j : dec.neighbors[i]) {
      const Rat& a = dec.cubes[i].side;
      const Rat& b2 = dec.cubes[j].side;
      if (!(a <= Rat(4) * b2 && b2 <= Rat(4) * a)) {
        if (rep.neighbor_ratios)
          rep.failures.push_back("neighbor ratio fails between cubes " + std::to_string(i) +
                                 " and " + std::to_string(j));
        rep.neighbor_ratios = false;
      }
      double r = a.to_double() / b2.to_double();
      worst_nr = std::max(worst_nr, std::max(r, 1.0 / r));
    }
  }
  rep.worst_neighbor_ratio = worst_nr;

  // Truncation estimate: collar thickness ~ 4 sqrt(n) 2^-G cell_size over the
  // boundary faces.
  double bound = 4.0 * std::sqrt(static_cast<double>(n)) *
                 std::ldexp(1.0, -dec.max_generation) *
                 std::pow(dom.cell_size().to_double(), n) *
                 static_cast<double>(dom.boundary_face_count());
  rep.collar_bound = dec.uncovered.to_double() < bound;
  if (!rep.collar_bound) rep.failures.push_back("uncovered collar exceeds the truncation estimate");

  return rep;
}

}  // namespace fracpoin
