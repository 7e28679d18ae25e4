#include <doctest.h>

#include "fracpoin/field.hpp"

using namespace fracpoin;

TEST_CASE("grids enumerate cells with exact geometry") {
  auto dom = build_domain_named("l_shape");
  auto grid = Grid::make(dom, 8);
  CHECK(grid->size() == 3 * 64);
  CHECK(grid->h() == Rat(1, 8));
  CHECK(grid->cell_weight_exact() == Rat(1, 64));

  // midpoints are exact and lookup inverts gcoord
  for (size_t i = 0; i < grid->size(); i += 17) {
    PointR p = grid->midpoint_exact(i);
    CHECK(grid->cell_box(i).contains_open(p));
    CHECK(grid->lookup(grid->gcoord(i)) == static_cast<int64_t>(i));
  }
  CHECK(grid->lookup({int64_t{1} << 30, 0, 0, 0}) == -1);
}

TEST_CASE("non-dyadic subdivisions work") {
  auto dom = build_domain_named("square");
  auto grid = Grid::make(dom, 12);
  CHECK(grid->size() == 144);
  CHECK(grid->h() == Rat(1, 12));
  CHECK_THROWS(Grid::make(dom, 0));
}

TEST_CASE("field families are seed-reproducible") {
  auto grid = Grid::make(build_domain_named("square"), 16);
  Field a = make_band_limited(grid, 42);
  Field b = make_band_limited(grid, 42);
  Field c = make_band_limited(grid, 43);
  CHECK(a.v == b.v);
  CHECK(a.v != c.v);

  Field x1 = make_coordinate(grid, 0);
  CHECK(x1.v[0] == grid->mid(0)[0]);

  Field z = make_constant(grid, 3.5);
  CHECK(z.integral() == doctest::Approx(3.5).epsilon(1e-12));

  Field r = make_band_limited(grid, 5);
  remove_mean(r);
  CHECK(std::fabs(r.integral()) <= 1e-14);
}

TEST_CASE("field batches parse their specs") {
  auto grid = Grid::make(build_domain_named("square"), 8);
  CHECK(make_field_batch(grid, "random:5", 1).size() == 5);
  CHECK(make_field_batch(grid, "coord:1", 1).size() == 1);
  CHECK(make_field_batch(grid, "bump", 1).size() == 1);
  CHECK(make_field_batch(grid, "cheb:3", 1).size() == 1);
  CHECK_THROWS(make_field_batch(grid, "nope", 1));
}
