#include <doctest.h>

#include "fracpoin/box_ops.hpp"
#include "fracpoin/whitney.hpp"

using namespace fracpoin;

TEST_CASE("whitney decomposition of the unit square verifies exactly") {
  auto dom = build_domain_named("square");
  auto dec = whitney_decompose(dom, 8);
  auto rep = verify_whitney(*dec);
  CHECK(rep.disjoint_interiors);
  CHECK(rep.volume_identity);
  CHECK(rep.contained);
  CHECK(rep.size_bounds);
  CHECK(rep.neighbor_ratios);
  CHECK(rep.neighbor_count);
  CHECK(rep.collar_bound);
  CHECK(rep.pass());
  CHECK(dec->size() > 100);
}

TEST_CASE("whitney construction is deterministic") {
  auto dom = build_domain_named("l_shape");
  auto a = whitney_decompose(dom, 6);
  auto b = whitney_decompose(dom, 6);
  REQUIRE(a->size() == b->size());
  for (size_t i = 0; i < a->size(); ++i) {
    CHECK(a->cubes[i].side == b->cubes[i].side);
    for (int k = 0; k < 2; ++k) CHECK(a->cubes[i].corner.x[k] == b->cubes[i].corner.x[k]);
  }
}

TEST_CASE("scaling the square scales its decomposition") {
  auto unit = whitney_decompose(build_domain_named("square"), 6);
  DomainSpec spec;
  spec.family = DomainSpec::Family::Square;
  spec.square_side = Rat(2);
  auto big = whitney_decompose(build_domain(spec), 6);
  REQUIRE(unit->size() == big->size());
  for (size_t i = 0; i < unit->size(); ++i) {
    CHECK(big->cubes[i].side == Rat(2) * unit->cubes[i].side);
    for (int k = 0; k < 2; ++k)
      CHECK(big->cubes[i].corner.x[k] == Rat(2) * unit->cubes[i].corner.x[k]);
  }
}

TEST_CASE("the l-shape needs more cubes than the square") {
  auto sq = whitney_decompose(build_domain_named("square"), 8);
  auto l = whitney_decompose(build_domain_named("l_shape"), 8);
  CHECK(l->size() > sq->size());
  CHECK(verify_whitney(*l).pass());
}

TEST_CASE("verify flags a hand-broken decomposition") {
  auto dom = build_domain_named("square");
  auto dec = whitney_decompose(dom, 5);
  WhitneyDecomposition broken = *dec;
  // inflate one cube so diam <= dist fails and interiors collide
  broken.cubes[0] = Cube::make(broken.cubes[0].corner, broken.cubes[0].side * Rat(3));
  auto rep = verify_whitney(broken);
  CHECK(!rep.pass());
  CHECK(!rep.failures.empty());
}

TEST_CASE("expanded cubes keep bounded overlap") {
  auto dom = build_domain_named("square");
  auto dec = whitney_decompose(dom, 5);
  auto expanded = expand_cubes(*dec);
  REQUIRE(expanded.size() == dec->size());
  for (size_t i = 0; i < expanded.size(); ++i) {
    CHECK(expanded[i].side == dec->cubes[i].side * Rat(9, 8));
    // same center
    for (int k = 0; k < 2; ++k)
      CHECK(expanded[i].center().x[k] == dec->cubes[i].center().x[k]);
  }
  std::vector<BoxR> boxes;
  for (const auto& c : expanded) boxes.push_back(c.box());
  int overlap = max_overlap(boxes);
  CHECK(overlap >= 1);
  CHECK(overlap <= 144);  // 12^2
  CHECK(overlap <= 6);    // observed small overlap in 2D
}

TEST_CASE("corner cube expansion matches the definition") {
  Cube q = Cube::make(PointR::of({Rat(0), Rat(0)}), Rat(1, 4));
  Cube e = q.dilated(Rat(9, 8));
  CHECK(e.side == Rat(9, 32));
  CHECK(e.center().x[0] == q.center().x[0]);
}

TEST_CASE("slit square decomposition respects the slit") {
  auto dom = build_domain_named("slit_square");
  auto dec = whitney_decompose(dom, 8);
  auto rep = verify_whitney(*dec);
  CHECK(rep.pass());
  // no accepted cube crosses the slit plane segment x = 1/2, y in [0, 1/2)
  for (const auto& c : dec->cubes) {
    bool crosses = c.corner.x[0] < Rat(1, 2) && Rat(1, 2) < c.corner.x[0] + c.side &&
                   c.corner.x[1] < Rat(1, 2);
    CHECK(!crosses);
  }
}
