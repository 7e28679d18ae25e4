#include <doctest.h>

#include <cmath>

#include "fracpoin/hardy.hpp"

using namespace fracpoin;

namespace {

// Domain [0,2]x[0,1] with a two-node covering: U_a = (0,1)^2,
// U_t = (1/2,2)x(0,1), B_t inside the overlap.
struct TwoNode {
  DomainPtr dom;
  GridPtr grid;
  CoveringPtr cov;
  std::shared_ptr<const CoveringGridCache> cache;

  TwoNode() {
    DomainSpec spec;
    spec.family = DomainSpec::Family::Explicit;
    spec.n = 2;
    spec.cell_size = Rat(1);
    spec.cells = {CellIndex{0, 0, 0, 0}, CellIndex{1, 0, 0, 0}};
    dom = build_domain(spec);
    grid = Grid::make(dom, 8);

    auto cov_m = std::make_shared<TreeCovering>();
    cov_m->kind = TreeCovering::Kind::Cube;
    cov_m->n = 2;
    cov_m->root = 0;
    cov_m->parent = {-1, 0};
    auto box = [](const Rat& x0, const Rat& y0, const Rat& x1, const Rat& y1) {
      return BoxR::make(PointR::of({x0, y0}), PointR::of({x1, y1}));
    };
    cov_m->U = {box(0, 0, 1, 1), box(Rat(1, 2), 0, 2, 1)};
    cov_m->V = {box(0, 0, 1, 1), box(1, 0, 2, 1)};
    cov_m->B = {BoxR{}, box(Rat(5, 8), Rat(1, 2), Rat(3, 4), Rat(5, 8))};
    cov_m->B[0] = box(0, 0, 0, 0);
    cov_m->overlap_N = 2;
    cov_m->m = 1;
    finalize_tree(*cov_m);
    cov = cov_m;
    cache = make_covering_grid_cache(cov, grid);
  }
};

}  // namespace

TEST_CASE("shadow fractions reproduce the exact shadow volumes") {
  auto dom = build_domain_named("square");
  auto dec = whitney_decompose(dom, 4);
  auto cov = john_tree_covering(dec);
  auto grid = Grid::make(dom, 16);
  auto cache = make_covering_grid_cache(cov, grid);
  double w = grid->cell_weight();
  for (size_t t = 0; t < cov->size(); ++t) {
    double sum = 0;
    for (const auto& [cell, frac] : cache->shadow_frac[t]) {
      (void)cell;
      sum += frac * w;
    }
    CHECK(sum == doctest::Approx(cache->shadow_vol_d[t]).epsilon(1e-12));
  }
}

TEST_CASE("constant input averages to the indicator of the transfer cubes") {
  TwoNode tn;
  Field one = make_constant(tn.grid, 1.0);
  BumpField tg = hardy_apply(*tn.cache, one);
  CHECK(tg.coeff[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hand-computed average on the two-node covering") {
  TwoNode tn;
  // g = 1 on U_t \ U_a = (1,2)x(0,1), 0 elsewhere; W_t = U_t has measure 3/2
  Field g;
  g.grid = tn.grid;
  g.v.assign(tn.grid->size(), 0.0);
  for (size_t i = 0; i < tn.grid->size(); ++i)
    if (tn.grid->mid(0)[i] > 1.0) g.v[i] = 1.0;
  BumpField tg = hardy_apply(*tn.cache, g);
  CHECK(tg.coeff[1] == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
}

TEST_CASE("T is positively homogeneous and monotone") {
  auto dom = build_domain_named("square");
  auto dec = whitney_decompose(dom, 4);
  auto cov = john_tree_covering(dec);
  auto grid = Grid::make(dom, 16);
  auto cache = make_covering_grid_cache(cov, grid);

  Field g = make_uniform_random(grid, 4);
  Field g3 = g;
  for (auto& x : g3.v) x *= 3.0;
  Field h = g;
  for (auto& x : h.v) x += 0.25;

  BumpField tg = hardy_apply(*cache, g);
  BumpField tg3 = hardy_apply(*cache, g3);
  BumpField th = hardy_apply(*cache, h);
  for (size_t t = 0; t < cov->size(); ++t) {
    if (static_cast<int>(t) == cov->root) continue;
    CHECK(tg3.coeff[t] == doctest::Approx(3.0 * tg.coeff[t]).epsilon(1e-12));
    CHECK(tg.coeff[t] <= th.coeff[t] + 1e-15);
  }
}

TEST_CASE("norm probe: sup norm ratio stays at most 1 for the averaging operator") {
  auto dom = build_domain_named("square");
  auto dec = whitney_decompose(dom, 4);
  auto cov = john_tree_covering(dec);
  auto grid = Grid::make(dom, 16);
  auto cache = make_covering_grid_cache(cov, grid);
  auto rep = hardy_norm_probe(*cache, std::numeric_limits<double>::infinity(), 0, nullptr, 30, 5);
  CHECK(rep.pass);
  CHECK(rep.bound == 2.0);
  CHECK(rep.max_ratio <= 1.0 + 1e-12);
}

TEST_CASE("norm probe respects the lemma bound, unweighted and weighted") {
  auto dom = build_domain_named("square");
  auto dec = whitney_decompose(dom, 5);
  auto cov = john_tree_covering(dec);
  auto grid = Grid::make(dom, 32);
  auto cache = make_covering_grid_cache(cov, grid);

  auto rep = hardy_norm_probe(*cache, 2.0, 0, nullptr, 60, 11);
  CHECK(rep.pass);
  CHECK(rep.bound == doctest::Approx(2.0 * std::sqrt(2.0 * 144.0)).epsilon(1e-12));

  auto corner = BoundarySet::corner(*dom);
  auto wrep = hardy_norm_probe(*cache, 2.0, 1.0, &corner, 60, 13);
  CHECK(wrep.pass);
  CHECK(wrep.c2 > 1.0);
}

TEST_CASE("probe input validation") {
  TwoNode tn;
  CHECK_THROWS(hardy_norm_probe(*tn.cache, 1.0, 0, nullptr, 10, 1));
  CHECK_THROWS(hardy_norm_probe(*tn.cache, 2.0, 0, nullptr, 0, 1));
  Field wrong;
  wrong.grid = Grid::make(tn.dom, 4);
  wrong.v.assign(wrong.grid->size(), 1.0);
  CHECK_THROWS(hardy_apply(*tn.cache, wrong));
}
