#pragma once

// Independent oracles used only by the test suites: brute-force boundary
// sampling for distances, Monte Carlo volume/average/double-integral
// estimators. These never reuse the implementation path they check.

#include <array>
#include <cmath>
#include <vector>

#include "fracpoin/geometry.hpp"
#include "fracpoin/kernels.hpp"
#include "fracpoin/util.hpp"

namespace fracpoin::testing {

struct McResult {
  double mean = 0;
  double sigma = 0;  // standard error of the mean
  bool within(double value, double ks = 3.0) const {
    return std::fabs(value - mean) <= ks * sigma;
  }
};

// Minimum distance to densely sampled points of every boundary face.
inline double brute_boundary_distance(const RectilinearDomain& dom,
                                      const std::array<double, kMaxDim>& x, int samples_per_face) {
  double best = std::numeric_limits<double>::infinity();
  const int n = dom.dim();
  for (const auto& face : dom.boundary_faces()) {
    std::array<double, kMaxDim> lo{}, hi{};
    for (int k = 0; k < n; ++k) {
      lo[k] = face.lo.x[k].to_double();
      hi[k] = face.hi.x[k].to_double();
    }
    // sample a lattice over the face (degenerate axes collapse)
    std::array<int, kMaxDim> steps{};
    for (int k = 0; k < n; ++k) steps[k] = hi[k] > lo[k] ? samples_per_face : 0;
    std::array<int, kMaxDim> idx{};
    while (true) {
      double d2 = 0;
      for (int k = 0; k < n; ++k) {
        double c = steps[k] ? lo[k] + (hi[k] - lo[k]) * idx[k] / steps[k] : lo[k];
        d2 += (x[k] - c) * (x[k] - c);
      }
      best = std::min(best, d2);
      int k = 0;
      while (k < n) {
        if (steps[k] && ++idx[k] <= steps[k]) break;
        idx[k] = 0;
        ++k;
      }
      if (k == n) break;
    }
  }
  return std::sqrt(best);
}

// Fraction-of-bounding-box volume of a box union.
inline McResult mc_union_volume(const std::vector<BoxR>& boxes, int n, long samples,
                                uint64_t seed) {
  PointR lo = boxes[0].lo, hi = boxes[0].hi;
  for (const auto& b : boxes)
    for (int k = 0; k < n; ++k) {
      lo.x[k] = min(lo.x[k], b.lo.x[k]);
      hi.x[k] = max(hi.x[k], b.hi.x[k]);
    }
  std::array<double, kMaxDim> l{}, h{};
  double bbvol = 1;
  for (int k = 0; k < n; ++k) {
    l[k] = lo.x[k].to_double();
    h[k] = hi.x[k].to_double();
    bbvol *= h[k] - l[k];
  }
  Rng rng(seed);
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    std::array<double, kMaxDim> p{};
    for (int k = 0; k < n; ++k) p[k] = rng.uniform(l[k], h[k]);
    for (const auto& b : boxes) {
      bool in = true;
      for (int k = 0; k < n; ++k)
        if (p[k] < b.lo.x[k].to_double() || p[k] > b.hi.x[k].to_double()) {
          in = false;
          break;
        }
      if (in) {
        ++hits;
        break;
      }
    }
  }
  double frac = static_cast<double>(hits) / static_cast<double>(samples);
  McResult r;
  r.mean = frac * bbvol;
  r.sigma = bbvol * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples));
  return r;
}

// Uniform point in the domain: uniform cell, then uniform inside it.
template <typename F>
inline std::array<double, kMaxDim> sample_domain_point(const RectilinearDomain& dom, Rng& rng,
                                                       F&&) {
  const auto& cells = dom.cells();
  const auto& c = cells[rng.below(cells.size())];
  double cs = dom.cell_size().to_double();
  std::array<double, kMaxDim> p{};
  for (int k = 0; k < dom.dim(); ++k) p[k] = (static_cast<double>(c[k]) + rng.uniform01()) * cs;
  return p;
}

// Self-normalized weighted average of u against d_F^{p beta}.
template <typename UFn>
inline McResult mc_weighted_average(const RectilinearDomain& dom, const BoundarySet* F, double p,
                                    double beta, UFn&& u, long samples, uint64_t seed) {
  Rng rng(seed);
  double sw = 0, swu = 0, sw2 = 0, swu2 = 0, swwu = 0;
  for (long i = 0; i < samples; ++i) {
    auto x = sample_domain_point(dom, rng, 0);
    double w = beta > 0 ? std::pow(F->distance_d(x), p * beta) : 1.0;
    double v = u(x);
    sw += w;
    swu += w * v;
    sw2 += w * w;
    swu2 += (w * v) * (w * v);
    swwu += w * (w * v);
  }
  double N = static_cast<double>(samples);
  double mw = sw / N, mwu = swu / N;
  McResult r;
  r.mean = mwu / mw;
  // delta method for the ratio estimator
  double var_wu = swu2 / N - mwu * mwu;
  double var_w = sw2 / N - mw * mw;
  double cov = swwu / N - mw * mwu;
  double var_ratio =
      (var_wu - 2.0 * r.mean * cov + r.mean * r.mean * var_w) / (mw * mw) / N;
  r.sigma = std::sqrt(std::max(var_ratio, 0.0));
  return r;
}

// Double integral of |u(x)-u(y)|^p mu(x,y) over the domain. X is uniform on
// the domain; Y given X comes from a half/half mixture of the uniform
// proposal and a log-radial proposal centered at X, which keeps the
// variance finite near the kernel singularity. The uniform component covers
// the whole support, so the estimator is unbiased:
//   Z = |u(X)-u(Y)|^p mu(X,Y) * |Omega| / q(Y | X).
template <typename UFn>
inline McResult mc_gagliardo(const RectilinearDomain& dom, const KernelSpec& kernel, double p,
                             UFn&& u, long samples, uint64_t seed, double r_floor = 1e-9) {
  Rng rng(seed);
  const int n = dom.dim();
  const double vol = dom.volume().to_double();
  BoxR bb = dom.bounding_box();
  double diam = 0;
  for (int k = 0; k < n; ++k) {
    double s = bb.side(k).to_double();
    diam += s * s;
  }
  diam = std::sqrt(diam);
  const double log_span = std::log(diam / r_floor);
  const double two_pi = 6.283185307179586476925286766559;

  double sum = 0, sum2 = 0;
  for (long i = 0; i < samples; ++i) {
    auto x = sample_domain_point(dom, rng, 0);
    std::array<double, kMaxDim> y{};
    if (rng.uniform01() < 0.5) {
      double r = r_floor * std::exp(rng.uniform01() * log_span);
      double a = rng.uniform(0.0, two_pi);
      y = x;
      if (n == 2) {
        y[0] += r * std::cos(a);
        y[1] += r * std::sin(a);
      } else {
        double c = rng.uniform(-1.0, 1.0), sphi = std::sqrt(1.0 - c * c);
        y[0] += r * sphi * std::cos(a);
        y[1] += r * sphi * std::sin(a);
        y[2] += r * c;
      }
    } else {
      y = sample_domain_point(dom, rng, 0);
    }
    double z = 0;
    if (dom.contains_closed_d(y)) {
      double r2 = 0;
      for (int k = 0; k < n; ++k) r2 += (x[k] - y[k]) * (x[k] - y[k]);
      double r = std::sqrt(r2);
      double mu = r > 0 ? kernel.mu(dom, x, y, p) : 0.0;
      if (mu > 0) {
        double qr = 0;
        if (r > r_floor && r < diam)
          qr = n == 2 ? 1.0 / (log_span * two_pi * r2)
                      : 1.0 / (log_span * 2.0 * two_pi * r2 * r);
        double q = 0.5 / vol + 0.5 * qr;
        double du = std::fabs(u(x) - u(y));
        z = std::pow(du, p) * mu * vol / q;
      }
    }
    sum += z;
    sum2 += z * z;
  }
  double N = static_cast<double>(samples);
  McResult r;
  r.mean = sum / N;
  r.sigma = std::sqrt(std::max(sum2 / N - r.mean * r.mean, 0.0) / N);
  return r;
}

}  // namespace fracpoin::testing
