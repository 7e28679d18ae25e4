#include <doctest.h>

#include <cmath>

#include "fracpoin/box_ops.hpp"
#include "fracpoin/geometry.hpp"
#include "support/oracles.hpp"

using namespace fracpoin;

namespace {
PointR pt(const Rat& x, const Rat& y) { return PointR::of({x, y}); }
}  // namespace

TEST_CASE("builtin domains have the right exact areas") {
  auto sq = build_domain_named("square");
  CHECK(sq->volume() == Rat(1));
  auto l = build_domain_named("l_shape");
  CHECK(l->volume() == Rat(3));
  auto slit = build_domain_named("slit_square");
  CHECK(slit->volume() == Rat(1));
  CHECK(slit->boundary_face_count() > 8);  // the slit contributes extra faces

  DomainSpec rooms;
  rooms.family = DomainSpec::Family::RoomsAndCorridors;
  rooms.rooms_k = 2;
  rooms.corridor_widths = {Rat(1, 4)};
  auto r = build_domain(rooms);
  // two unit rooms plus a 1/2 x 1/4 corridor, counted from the cell complex
  CHECK(r->cells().size() == 34);
  CHECK(r->volume() == Rat(2) + Rat(1, 8));
}

TEST_CASE("domain validation rejects bad cell sets") {
  CHECK_THROWS(RectilinearDomain(2, Rat(1), {}));
  CHECK_THROWS(RectilinearDomain(2, Rat(1),
                                 {CellIndex{0, 0, 0, 0}, CellIndex{2, 2, 0, 0}}));  // disconnected
}

TEST_CASE("boundary distance matches the named examples") {
  auto sq = build_domain_named("square");
  CHECK(sq->boundary_distance(pt(Rat(1, 2), Rat(1, 2))) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sq->boundary_distance(pt(Rat(1, 4), Rat(1, 2))) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS(sq->boundary_distance(pt(Rat(2), Rat(2))));

  auto l = build_domain_named("l_shape");
  // (3/4, 3/4) sees the reentrant corner (1,1) as its nearest boundary point
  double d = l->boundary_distance(pt(Rat(3, 4), Rat(3, 4)));
  CHECK(d == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-15));
  auto brute = testing::brute_boundary_distance(*l, {0.75, 0.75}, 2000);
  CHECK(d == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("boundary distance agrees with brute force at random rational points") {
  auto l = build_domain_named("l_shape");
  Rng rng(7);
  int tested = 0;
  while (tested < 25) {
    PointR p = pt(Rat(static_cast<long long>(rng.below(512)), 256),
                  Rat(static_cast<long long>(rng.below(512)), 256));
    if (!l->contains_open(p)) continue;
    ++tested;
    double exact = l->boundary_distance(p);
    double brute = testing::brute_boundary_distance(*l, {p.x[0].to_double(), p.x[1].to_double()},
                                                    1500);
    CHECK(exact <= brute + 1e-12);
    CHECK(exact == doctest::Approx(brute).epsilon(1e-5));
  }
}

TEST_CASE("set distance: corner, whole boundary and one edge") {
  auto sq = build_domain_named("square");
  auto corner = BoundarySet::corner(*sq);
  CHECK(corner.distance(pt(Rat(1, 2), Rat(1, 2))) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));

  auto full = BoundarySet::whole_boundary(*sq);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    PointR p = pt(Rat(1 + static_cast<long long>(rng.below(255)), 256),
                  Rat(1 + static_cast<long long>(rng.below(255)), 256));
    CHECK(full.sq_dist(p) == sq->boundary_sq_dist(p));
  }

  auto edge = BoundarySet::one_edge(*sq);  // the left edge x = 0
  CHECK(edge.distance(pt(Rat(3, 4), Rat(1, 3))) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("d(x) <= d_F(x) on a quadrature lattice") {
  auto l = build_domain_named("l_shape");
  auto corner = BoundarySet::corner(*l);
  auto edge = BoundarySet::one_edge(*l);
  for (int i = 1; i < 32; i += 2)
    for (int j = 1; j < 32; j += 2) {
      PointR p = pt(Rat(i, 16), Rat(j, 16));
      if (!l->contains_open(p)) continue;
      CHECK(l->boundary_sq_dist(p) <= corner.sq_dist(p));
      CHECK(l->boundary_sq_dist(p) <= edge.sq_dist(p));
    }
}

TEST_CASE("distances scale linearly with the domain") {
  DomainSpec spec;
  spec.family = DomainSpec::Family::Square;
  spec.square_side = Rat(2);
  auto big = build_domain(spec);
  auto unit = build_domain_named("square");
  PointR p = pt(Rat(3, 8), Rat(5, 8));
  PointR p2 = pt(Rat(3, 4), Rat(5, 4));
  CHECK(big->boundary_sq_dist(p2) == Rat(4) * unit->boundary_sq_dist(p));
}

TEST_CASE("boundary sets reject segments off the boundary") {
  auto sq = build_domain_named("square");
  PointR inside = pt(Rat(1, 2), Rat(1, 2));
  CHECK_THROWS(BoundarySet(*sq, {BoxR::make(inside, inside)}));
  PointR a = pt(Rat(0), Rat(0)), b = pt(Rat(0), Rat(1));
  CHECK_NOTHROW(BoundarySet(*sq, {BoxR::make(a, b)}));
}

TEST_CASE("box union volume and overlap are exact") {
  PointR o = pt(Rat(0), Rat(0));
  BoxR a = BoxR::make(o, pt(Rat(1), Rat(1)));
  BoxR b = BoxR::make(pt(Rat(1, 2), Rat(1, 2)), pt(Rat(3, 2), Rat(3, 2)));
  CHECK(union_volume({a, b}) == Rat(7, 4));
  CHECK(max_overlap({a, b}) == 2);
  CHECK(interiors_intersect_witness({a, b}).has_value());
  BoxR c = BoxR::make(pt(Rat(1), Rat(0)), pt(Rat(2), Rat(1)));
  CHECK(!interiors_intersect_witness({a, c}).has_value());
  CHECK(touching_pairs({a, c}).size() == 1);

  auto mc = testing::mc_union_volume({a, b}, 2, 200000, 11);
  CHECK(mc.within(union_volume({a, b}).to_double()));
}

TEST_CASE("slit square blocks adjacency through the slit") {
  auto slit = build_domain_named("slit_square");
  // the slit {1/2} x [0,1/2] lies on the boundary
  PointR on_slit = pt(Rat(1, 2), Rat(1, 4));
  CHECK(slit->boundary_sq_dist(on_slit) == Rat(0));
  PointR above = pt(Rat(1, 2), Rat(3, 4));
  CHECK(slit->boundary_sq_dist(above) > Rat(0));
}
