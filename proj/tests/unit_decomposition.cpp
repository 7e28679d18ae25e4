#include <doctest.h>

#include <cmath>
#include <set>

#include "fracpoin/decomposition.hpp"

using namespace fracpoin;

namespace {

struct CubeSetup {
  DomainPtr dom;
  GridPtr grid;
  CoveringPtr cov;
  std::shared_ptr<const CoveringGridCache> cache;

  explicit CubeSetup(int m, int div) {
    dom = build_domain_named("square");
    grid = Grid::make(dom, div);
    cov = cube_tree_covering_m(Cube::make(PointR::of({Rat(0), Rat(0)}), Rat(1)), m);
    cache = make_covering_grid_cache(cov, grid);
  }

  Field zero_mean_random(uint64_t seed) const {
    Field f = make_band_limited(grid, seed);
    remove_mean(f);
    return f;
  }
};

}  // namespace

TEST_CASE("zero field decomposes to nothing") {
  CubeSetup s(4, 32);
  Field z = make_constant(s.grid, 0.0);
  auto res = orthogonal_decompose(s.cache, z);
  CHECK(res.parts.empty());
  CHECK(verify_decomposition(*s.cache, z, res).pass());
}

TEST_CASE("nonzero mean input is rejected") {
  CubeSetup s(4, 32);
  Field one = make_constant(s.grid, 1.0);
  CHECK_THROWS(orthogonal_decompose(s.cache, one));
}

TEST_CASE("two-node hand example telescopes as expected") {
  // m = 2 covering of the unit square: 4 nodes; use the two-block field
  // g = chi_{V_t} - chi_{V_a} for a child t of the root.
  CubeSetup s(2, 16);
  int t = s.cov->children[s.cov->root].front();
  Field g;
  g.grid = s.grid;
  g.v.assign(s.grid->size(), 0.0);
  for (size_t c = 0; c < s.grid->size(); ++c) {
    if (s.cache->owner[c] == t)
      g.v[c] = 1.0;
    else if (s.cache->owner[c] == s.cov->root)
      g.v[c] = -1.0;
  }
  auto res = orthogonal_decompose(s.cache, g);
  // S_t = integral over V_t of g = |V_t| = 1/4
  CHECK(res.subtree_integral[t] == doctest::Approx(0.25).epsilon(1e-12));
  auto rep = verify_decomposition(*s.cache, g, res);
  CHECK(rep.pass());

  for (const auto& part : res.parts) {
    if (part.node != t) continue;
    REQUIRE(part.bumps.size() >= 1);
    bool found = false;
    for (auto [sn, amp] : part.bumps)
      if (sn == t) {
        CHECK(amp == doctest::Approx(-0.25).epsilon(1e-12));
        found = true;
      }
    CHECK(found);
  }
}

TEST_CASE("random zero-mean fields satisfy all decomposition properties") {
  CubeSetup s(4, 32);
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Field g = s.zero_mean_random(seed);
    auto res = orthogonal_decompose(s.cache, g);
    auto rep = verify_decomposition(*s.cache, g, res);
    CHECK(rep.sum_ok);
    CHECK(rep.support_ok);
    CHECK(rep.means_ok);
    CHECK(rep.bounds_ok);
    CHECK(rep.bound_violations == 0);
  }
}

TEST_CASE("john covering decomposition verifies on covered fields") {
  auto dom = build_domain_named("square");
  auto dec = whitney_decompose(dom, 5);
  auto cov = john_tree_covering(dec);
  auto grid = Grid::make(dom, 32);
  auto cache = make_covering_grid_cache(cov, grid);
  REQUIRE(cache->covered_cells > 0);

  for (uint64_t seed = 1; seed <= 5; ++seed) {
    Field g = make_band_limited(grid, seed);
    // restrict to the covered region, zero mean there
    double sum = 0;
    for (size_t c = 0; c < g.v.size(); ++c) {
      if (cache->owner[c] < 0)
        g.v[c] = 0;
      else
        sum += g.v[c];
    }
    double mean = sum / static_cast<double>(cache->covered_cells);
    for (size_t c = 0; c < g.v.size(); ++c)
      if (cache->owner[c] >= 0) g.v[c] -= mean;

    auto res = orthogonal_decompose(cache, g);
    auto rep = verify_decomposition(*cache, g, res);
    CHECK(rep.pass());
  }
}

TEST_CASE("verify flags constructed failures") {
  CubeSetup s(4, 32);
  Field g = s.zero_mean_random(77);
  auto res = orthogonal_decompose(s.cache, g);

  SUBCASE("a part shifted by a constant loses its zero mean") {
    DecompositionResult broken = res;
    for (auto& [cell, val] : broken.parts.front().cells) val += 0.5;
    auto rep = verify_decomposition(*s.cache, g, broken);
    CHECK(!rep.means_ok);
    CHECK(!rep.pass());
  }
  SUBCASE("support leaked outside U_t is flagged") {
    DecompositionResult broken = res;
    // move a cell owned by another node into the first part
    uint32_t foreign = 0;
    for (size_t c = 0; c < s.grid->size(); ++c)
      if (s.cache->owner[c] != broken.parts.front().node) {
        foreign = static_cast<uint32_t>(c);
        break;
      }
    broken.parts.front().cells.emplace_back(foreign, 1.0);
    auto rep = verify_decomposition(*s.cache, g, broken);
    CHECK(!rep.support_ok);
  }
}

TEST_CASE("support propagates only along ancestors and their children") {
  CubeSetup s(4, 32);
  // g supported on exactly two cells, +1 and -1, inside one base piece
  Field g;
  g.grid = s.grid;
  g.v.assign(s.grid->size(), 0.0);
  int target = -1;
  for (size_t c = 0; c + 1 < s.grid->size(); ++c)
    if (s.cache->owner[c] >= 0 && s.cache->owner[c] == s.cache->owner[c + 1]) {
      g.v[c] = 1.0;
      g.v[c + 1] = -1.0;
      target = s.cache->owner[c];
      break;
    }
  REQUIRE(target >= 0);
  auto res = orthogonal_decompose(s.cache, g);

  std::set<int> allowed;  // nodes whose shadow meets supp(g), plus children
  for (int t = target; t >= 0; t = s.cov->parent[t]) {
    allowed.insert(t);
    for (int c : s.cov->children[t]) allowed.insert(c);
    if (t == s.cov->root) break;
  }
  for (const auto& part : res.parts) CHECK(allowed.count(part.node) == 1);
}

TEST_CASE("grid projection preserves part integrals") {
  CubeSetup s(4, 32);
  Field g = s.zero_mean_random(3);
  auto res = orthogonal_decompose(s.cache, g);
  double w = s.grid->cell_weight();
  for (size_t i = 0; i < res.parts.size(); ++i) {
    auto proj = res.project_part(i);
    double total = 0;
    for (double v : proj) total += v;
    CHECK(std::fabs(total * w) <= 1e-12);
  }
}
