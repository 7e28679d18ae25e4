#include <doctest.h>

#include <cmath>

#include "fracpoin/quadrature.hpp"
#include "support/oracles.hpp"

using namespace fracpoin;

TEST_CASE("weighted averages: constants are fixed points, x1 averages to 1/2") {
  auto grid = Grid::make(build_domain_named("square"), 64);
  Field c = make_constant(grid, 4.25);
  CHECK(weighted_average(c, 2, 0, nullptr) == doctest::Approx(4.25).epsilon(1e-14));

  auto corner = std::make_shared<BoundarySet>(BoundarySet::corner(grid->domain()));
  CHECK(weighted_average(c, 2, 1, corner.get()) == doctest::Approx(4.25).epsilon(1e-14));

  Field x1 = make_coordinate(grid, 0);
  CHECK(weighted_average(x1, 2, 0, nullptr) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("weighted average agrees with a Monte Carlo oracle") {
  auto dom = build_domain_named("square");
  auto grid = Grid::make(dom, 64);
  auto corner = BoundarySet::corner(*dom);
  Field x1 = make_coordinate(grid, 0);
  double got = weighted_average(x1, 2, 1, &corner);
  auto mc = testing::mc_weighted_average(
      *dom, &corner, 2, 1, [](const std::array<double, kMaxDim>& x) { return x[0]; }, 2000000, 5);
  CHECK(mc.within(got));
}

TEST_CASE("lp norms: zero at the center, closed form for x1, homogeneous") {
  auto grid = Grid::make(build_domain_named("square"), 64);
  Field c = make_constant(grid, -2.0);
  CHECK(lp_norm(c, 2, 0, nullptr) == doctest::Approx(0.0).epsilon(1e-14));

  Field x1 = make_coordinate(grid, 0);
  // midpoint semantics: the discrete variance is (1 - 1/N^2)/12 exactly
  CHECK(lp_norm(x1, 2, 0, nullptr) ==
        doctest::Approx(std::sqrt((1.0 - 1.0 / (64.0 * 64.0)) / 12.0)).epsilon(1e-13));
  auto fine = Grid::make(build_domain_named("square"), 512);
  Field x1f = make_coordinate(fine, 0);
  CHECK(std::fabs(lp_norm(x1f, 2, 0, nullptr) - 1.0 / std::sqrt(12.0)) < 1e-6);

  Field x2 = x1;
  for (auto& v : x2.v) v *= 3.0;
  CHECK(lp_norm(x2, 2, 0, nullptr) ==
        doctest::Approx(3.0 * lp_norm(x1, 2, 0, nullptr)).epsilon(1e-12));
}

TEST_CASE("gagliardo vanishes on constants for every kernel family") {
  auto dom = build_domain_named("square");
  auto grid = Grid::make(dom, 16);
  Field c = make_constant(grid, 7.0);
  auto corner = std::make_shared<BoundarySet>(BoundarySet::corner(*dom));
  RhoSpec rho;
  rho.s = 0.5;
  for (KernelSpec k : {KernelSpec::classical(0.5), KernelSpec::tau_ball(0.5, 0.5),
                       KernelSpec::weighted_main(0.5, 0.5, 1.0, corner),
                       KernelSpec::radial_ponce(rho, 0.0, nullptr)}) {
    CHECK(gagliardo(c, k, 2) == 0.0);
  }
}

TEST_CASE("gagliardo is p-homogeneous and the ratio is shift invariant") {
  auto grid = Grid::make(build_domain_named("square"), 16);
  Field u = make_band_limited(grid, 9);
  KernelSpec k = KernelSpec::tau_ball(0.5, 0.5);
  double g1 = gagliardo(u, k, 2);
  Field v = u;
  for (auto& x : v.v) x *= 5.0;
  CHECK(gagliardo(v, k, 2) == doctest::Approx(25.0 * g1).epsilon(1e-12));

  RatioRecord a = verify_inequality(u, 2, k, 1e300);
  Field w = u;
  for (auto& x : w.v) x += 11.0;
  RatioRecord b = verify_inequality(w, 2, k, 1e300);
  CHECK(a.ratio == doctest::Approx(b.ratio).epsilon(1e-9));
}

TEST_CASE("tau monotonicity of the ball kernel") {
  auto grid = Grid::make(build_domain_named("square"), 16);
  Field u = make_band_limited(grid, 21);
  double lo = gagliardo(u, KernelSpec::tau_ball(0.5, 0.25), 2);
  double hi = gagliardo(u, KernelSpec::tau_ball(0.5, 0.5), 2);
  CHECK(lo <= hi * (1 + 1e-12));
}

TEST_CASE("classical kernel pair coefficients are symmetric") {
  auto grid = Grid::make(build_domain_named("square"), 8);
  KernelSpec k = KernelSpec::classical(0.4);
  std::vector<std::vector<double>> c(grid->size(), std::vector<double>(grid->size(), 0.0));
  pair_coefficients(*grid, k, 2, {}, [&](uint32_t i, uint32_t j, double v) { c[i][j] = v; });
  for (size_t i = 0; i < grid->size(); i += 7)
    for (size_t j = 0; j < grid->size(); j += 5) {
      if (i == j) continue;
      CHECK(c[i][j] == doctest::Approx(c[j][i]).epsilon(1e-12));
    }
}

TEST_CASE("pair coefficients reproduce the fused quadrature") {
  auto dom = build_domain_named("square");
  auto grid = Grid::make(dom, 12);
  auto corner = std::make_shared<BoundarySet>(BoundarySet::corner(*dom));
  Field u = make_band_limited(grid, 33);
  for (KernelSpec k :
       {KernelSpec::classical(0.3), KernelSpec::weighted_main(0.5, 0.5, 1.0, corner)}) {
    double direct = gagliardo(u, k, 2);
    double via_coeffs = 0;
    pair_coefficients(*grid, k, 2, {}, [&](uint32_t i, uint32_t j, double c) {
      double du = u.v[i] - u.v[j];
      via_coeffs += c * du * du;
    });
    CHECK(direct == doctest::Approx(via_coeffs).epsilon(1e-11));
  }
}

TEST_CASE("radial kernel with power rho matches the plain power kernel") {
  auto dom = build_domain_named("square");
  auto grid = Grid::make(dom, 32);
  auto corner = std::make_shared<BoundarySet>(BoundarySet::corner(*dom));
  double p = 2, s = 0.5, beta = 1;
  RhoSpec rho;
  rho.kind = RhoSpec::Kind::Power;
  rho.s = s;
  KernelSpec ponce = KernelSpec::radial_ponce(rho, beta, corner);

  Rng rng(17);
  int checked = 0;
  while (checked < 10000) {
    size_t i = rng.below(grid->size());
    size_t j = rng.below(grid->size());
    if (i == j) continue;
    auto x = grid->mid_point(i), y = grid->mid_point(j);
    double got = ponce.mu(dom ? *dom : *dom, x, y, p);
    // reference: (2 d(x))^{ps} d_F^{p beta}(x) chi_{B(x,d(x))}(y) |x-y|^{-n-sp}
    double d = dom->boundary_distance_d(x);
    double dF = corner->distance_d(x);
    double r2 = 0;
    for (int k = 0; k < 2; ++k) r2 += (x[k] - y[k]) * (x[k] - y[k]);
    double r = std::sqrt(r2);
    double want = r <= d ? std::pow(2.0 * d, p * s) * std::pow(dF, p * beta) *
                               std::pow(r, -(2.0 + s * p))
                         : 0.0;
    if (want == 0.0) {
      CHECK(got == 0.0);
    } else {
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
    ++checked;
  }
}

TEST_CASE("local cube inequality holds with the elementary constant") {
  // ratio <= (diam(U)^{n+sp} / |U|)^{1/p} on a cube, classical kernel
  auto grid = Grid::make(build_domain_named("square"), 16);
  double p = 2, s = 0.5;
  double constant = std::pow(std::pow(std::sqrt(2.0), 2 + s * p), 1.0 / p);
  KernelSpec k = KernelSpec::classical(s);
  for (uint64_t seed = 1; seed <= 12; ++seed) {
    Field u = make_band_limited(grid, seed);
    RatioRecord rec = verify_inequality(u, p, k, constant);
    CHECK(rec.pass);
  }
}

TEST_CASE("gagliardo agrees with the Monte Carlo oracle on a smooth field") {
  auto dom = build_domain_named("square");
  auto grid = Grid::make(dom, 64);
  Field x1 = make_coordinate(grid, 0);
  KernelSpec k = KernelSpec::classical(0.15);
  QuadOptions opts;
  opts.diag_depth = 5;
  double got = gagliardo(x1, k, 2, opts);
  auto mc = testing::mc_gagliardo(
      *dom, k, 2, [](const std::array<double, kMaxDim>& x) { return x[0]; }, 2000000, 3);
  CHECK(std::fabs(got - mc.mean) <= 3.0 * mc.sigma + 0.003 * mc.mean);
}

TEST_CASE("localized right-hand side runs over a covering") {
  auto dom = build_domain_named("square");
  auto dec = whitney_decompose(dom, 4);
  auto cov = john_tree_covering(dec);
  auto grid = Grid::make(dom, 16);
  Field u = make_band_limited(grid, 2);
  KernelSpec k = KernelSpec::weighted_main(0.5, 0.5, 0.0, nullptr);
  double loc = localized_rhs(u, *cov, k, 2);
  CHECK(loc > 0.0);
  CHECK(std::isfinite(loc));
}
