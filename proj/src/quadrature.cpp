#include "fracpoin/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>

#include "fracpoin/pair_kernels.hpp"
#include "fracpoin/util.hpp"

namespace fracpoin {

namespace {

std::vector<double> weight_values(const Field& u, double p, double beta, const BoundarySet* F) {
  std::vector<double> w(u.grid->size(), 1.0);
  if (beta > 0.0) {
    if (F == nullptr) throw std::invalid_argument("beta > 0 requires a boundary set F");
    auto dF = distances_to(*u.grid, *F);
    for (size_t i = 0; i < w.size(); ++i) w[i] = std::pow(dF[i], p * beta);
  }
  return w;
}

// Shared context for the pair quadrature over one grid.
struct PairQuad {
  const Grid& grid;
  const KernelSpec& kernel;
  double p;
  QuadOptions opts;

  int n;
  double h, halfwidth, near2, wcell;
  std::vector<double> A;   // hoisted x-factors
  std::vector<double> R2;  // squared cutoff radii, -1 when none
  kern::RowCtx proto;

  PairQuad(const Grid& g, const KernelSpec& k, double p_, const QuadOptions& o)
      : grid(g), kernel(k), p(p_), opts(o) {
    kernel.validate();
    if (!(p > 1.0)) throw std::invalid_argument("quadrature: p > 1 required");
    n = grid.dim();
    h = grid.h_d();
    halfwidth = 0.5 * h;
    near2 = 3.0 * h * h;
    wcell = grid.cell_weight();
    kern::classify_exponents(p, kernel.alpha(n, p), proto);
    proto.near2 = near2;
    proto.halfwidth = halfwidth;

    const size_t N = grid.size();
    A.assign(N, 1.0);
    R2.assign(N, -1.0);
    std::vector<double> dF;
    if (kernel.beta > 0.0) dF = distances_to(grid, *kernel.F);
    for (size_t i = 0; i < N; ++i) {
      auto xf = kernel.x_factors(grid.domain(), p, grid.dist_boundary()[i],
                                 kernel.beta > 0.0 ? dF[i] : 0.0);
      A[i] = xf.A;
      R2[i] = xf.radius >= 0.0 ? xf.radius * xf.radius : -1.0;
    }
  }

  double y_kern(double r2) const {
    if (kernel.power_law()) return kern::kern_r2(r2, proto);
    return kernel.y_part(n, p, std::sqrt(r2));
  }

  // Indicator-refined coefficient (fraction of the y-cell inside the ball,
  // weighted by the kernel at sub-midpoints). x stays at the source cell
  // midpoint; returns sum of (subvol/cellvol) * kern.
  double chi_coeff(const std::array<double, kMaxDim>& x, std::array<double, kMaxDim> lo,
                   double side, double r2cut, int depth) const {
    std::array<double, kMaxDim> mid{};
    double r2 = 0, r2min = 0, r2max = 0;
    for (int k = 0; k < n; ++k) {
      mid[k] = lo[k] + 0.5 * side;
      double d = std::fabs(x[k] - mid[k]);
      double g = d - 0.5 * side;
      if (g < 0) g = 0;
      double s = d + 0.5 * side;
      r2 += (x[k] - mid[k]) * (x[k] - mid[k]);
      r2min += g * g;
      r2max += s * s;
    }
    if (r2min >= r2cut) return 0.0;
    if (r2max <= r2cut || depth == 0) {
      if (depth == 0 && !(r2 <= r2cut)) return 0.0;
      return y_kern(r2);
    }
    double sum = 0, sub = 0.5 * side;
    for (int child = 0; child < (1 << n); ++child) {
      std::array<double, kMaxDim> clo = lo;
      for (int k = 0; k < n; ++k)
        if (child & (1 << k)) clo[k] += sub;
      sum += chi_coeff(x, clo, sub, r2cut, depth - 1) / static_cast<double>(1 << n);
    }
    return sum;
  }

  // Touching-pair coefficient by recursive subdivision in integer
  // sub-lattice coordinates; includes all volume and x-factor weights.
  double near_coeff(size_t i, size_t j) const {
    std::array<int64_t, kMaxDim> D{};
    for (int k = 0; k < n; ++k) D[k] = grid.gcoord(j)[k] - grid.gcoord(i)[k];
    std::array<double, kMaxDim> ci{}, cj{};
    for (int k = 0; k < n; ++k) {
      ci[k] = grid.mid(k)[i] - halfwidth;
      cj[k] = grid.mid(k)[j] - halfwidth;
    }
    struct Rec {
      const PairQuad& q;
      const std::array<double, kMaxDim>& ci;
      const std::array<double, kMaxDim>& cj;
      const std::array<int64_t, kMaxDim>& D;

      double run(int level, const std::array<int64_t, kMaxDim>& a,
                 const std::array<int64_t, kMaxDim>& b) const {
        if (level >= q.opts.diag_depth) return 0.0;
        double sum = 0;
        const int n = q.n;
        const double side = q.h / static_cast<double>(int64_t{1} << (level + 1));
        for (int ca = 0; ca < (1 << n); ++ca) {
          std::array<int64_t, kMaxDim> an{};
          for (int k = 0; k < n; ++k) an[k] = 2 * a[k] + ((ca >> k) & 1);
          for (int cb = 0; cb < (1 << n); ++cb) {
            std::array<int64_t, kMaxDim> bn{};
            bool touch = true;
            for (int k = 0; k < n; ++k) {
              bn[k] = 2 * b[k] + ((cb >> k) & 1);
              int64_t diff = (D[k] << (level + 1)) + bn[k] - an[k];
              if (diff > 1 || diff < -1) touch = false;
            }
            if (touch) {
              sum += run(level + 1, an, bn);
              continue;
            }
            // midpoint term at this refinement
            std::array<double, kMaxDim> x{}, y{};
            double r2 = 0;
            for (int k = 0; k < n; ++k) {
              x[k] = ci[k] + (static_cast<double>(an[k]) + 0.5) * side;
              y[k] = cj[k] + (static_cast<double>(bn[k]) + 0.5) * side;
              double d = x[k] - y[k];
              r2 += d * d;
            }
            double db = q.grid.domain().boundary_distance_d(x);
            double dF = q.kernel.beta > 0.0 ? q.kernel.F->distance_d(x) : 0.0;
            auto xf = q.kernel.x_factors(q.grid.domain(), q.p, db, dF);
            if (xf.radius >= 0.0 && r2 > xf.radius * xf.radius) continue;
            double w = std::pow(side, n);
            sum += w * w * xf.A * q.y_kern(r2);
          }
        }
        return sum;
      }
    } rec{*this, ci, cj, D};
    std::array<int64_t, kMaxDim> z{};
    return rec.run(0, z, z);
  }

  // Far coefficient at midpoints (no straddle handling; callers route
  // straddlers to chi_coeff).
  double far_coeff(size_t i, size_t j) const {
    double r2 = 0;
    for (int k = 0; k < n; ++k) {
      double d = grid.mid(k)[i] - grid.mid(k)[j];
      r2 += d * d;
    }
    if (R2[i] >= 0.0 && !(r2 <= R2[i])) return 0.0;
    return wcell * wcell * A[i] * y_kern(r2);
  }

  bool lattice_touching(size_t i, size_t j) const {
    for (int k = 0; k < n; ++k) {
      int64_t d = grid.gcoord(i)[k] - grid.gcoord(j)[k];
      if (d > 1 || d < -1) return false;
    }
    return true;
  }
};

// Generic scalar row for kernels without a power-law y-part or for n != 2;
// same skip/straddle semantics as the dispatched row.
void row_generic(const PairQuad& q, size_t i, const std::vector<double>& u, double acc[4],
                 std::vector<uint32_t>& straddle) {
  const int n = q.n;
  const double R2 = q.R2[i];
  const bool cut = R2 >= 0.0;
  std::array<double, kMaxDim> xi{};
  for (int k = 0; k < n; ++k) xi[k] = q.grid.mid(k)[i];
  const double ui = u[i];
  for (size_t j = 0; j < u.size(); ++j) {
    double r2 = 0, r2min = 0, r2max = 0;
    for (int k = 0; k < n; ++k) {
      double d = q.grid.mid(k)[j] - xi[k];
      r2 += d * d;
      if (cut) {
        double ad = std::fabs(d);
        double g = ad - q.halfwidth;
        if (g < 0) g = 0;
        double s = ad + q.halfwidth;
        r2min += g * g;
        r2max += s * s;
      }
    }
    if (r2 < q.near2) continue;
    if (cut) {
      if (r2min < R2 && R2 < r2max) {
        straddle.push_back(static_cast<uint32_t>(j));
        continue;
      }
      if (!(r2 <= R2)) continue;
    }
    double du = ui - u[j];
    acc[j & 3] += kern::du_pow(du, q.proto) * q.y_kern(r2);
  }
}

double gagliardo_impl(const Field& u, const PairQuad& q) {
  const size_t N = q.grid.size();
  const bool fast = q.kernel.power_law() && q.n == 2;
  kern::RowFn row = kern::row_power_n2();

  constexpr size_t kBlock = 64;
  const size_t nblocks = (N + kBlock - 1) / kBlock;
  std::vector<double> block_sums(nblocks, 0.0);

  parallel_blocks(static_cast<int>(nblocks), [&](int bi) {
    size_t lo = static_cast<size_t>(bi) * kBlock;
    size_t hi = std::min(lo + kBlock, N);
    std::vector<uint32_t> sbuf(N);
    std::vector<uint32_t> straddle;
    double bsum = 0;
    for (size_t i = lo; i < hi; ++i) {
      straddle.clear();
      double acc[4] = {0, 0, 0, 0};
      if (fast) {
        kern::RowCtx ctx = q.proto;
        ctx.xi = q.grid.mid(0)[i];
        ctx.yi = q.grid.mid(1)[i];
        ctx.ui = u.v[i];
        ctx.R2 = q.R2[i];
        size_t ns = 0;
        row(ctx, q.grid.mid(0).data(), q.grid.mid(1).data(), u.v.data(), N, acc, sbuf.data(),
            &ns);
        straddle.assign(sbuf.begin(), sbuf.begin() + ns);
      } else {
        row_generic(q, i, u.v, acc, straddle);
      }
      double isum = q.A[i] * (q.wcell * q.wcell) * kern::reduce4(acc);

      // straddling cells: indicator refined, x fixed at the midpoint
      if (!straddle.empty()) {
        std::array<double, kMaxDim> xi{};
        for (int k = 0; k < q.n; ++k) xi[k] = q.grid.mid(k)[i];
        double ssum = 0;
        for (uint32_t j : straddle) {
          std::array<double, kMaxDim> lo_j{};
          for (int k = 0; k < q.n; ++k) lo_j[k] = q.grid.mid(k)[j] - q.halfwidth;
          double coeff = q.chi_coeff(xi, lo_j, q.h, q.R2[i], q.opts.chi_depth);
          ssum += kern::du_pow(u.v[i] - u.v[j], q.proto) * coeff;
        }
        isum += q.A[i] * (q.wcell * q.wcell) * ssum;
      }

      // touching cells: recursive subdivision with exact per-sub x-factors
      {
        std::array<int64_t, kMaxDim> g = q.grid.gcoord(i);
        std::array<int64_t, kMaxDim> nb{};
        const int n = q.n;
        int total = 1;
        for (int k = 0; k < n; ++k) total *= 3;
        for (int c = 0; c < total; ++c) {
          int cc = c;
          bool self = true;
          for (int k = 0; k < n; ++k) {
            int d = cc % 3 - 1;
            cc /= 3;
            nb[k] = g[k] + d;
            if (d != 0) self = false;
          }
          if (self) continue;
          int64_t j = q.grid.lookup(nb);
          if (j < 0) continue;
          double coeff = q.near_coeff(i, static_cast<size_t>(j));
          isum += kern::du_pow(u.v[i] - u.v[static_cast<size_t>(j)], q.proto) * coeff;
        }
      }
      bsum += isum;
    }
    block_sums[bi] = bsum;
  });

  return pairwise_sum(block_sums);
}

}  // namespace

double weighted_average(const Field& u, double p, double beta, const BoundarySet* F) {
  auto w = weight_values(u, p, beta, F);
  std::vector<double> num(u.v.size()), den(u.v.size());
  for (size_t i = 0; i < u.v.size(); ++i) {
    num[i] = w[i] * u.v[i];
    den[i] = w[i];
  }
  return pairwise_sum(num) / pairwise_sum(den);
}

double lp_norm(const Field& u, double p, double beta, const BoundarySet* F,
               std::optional<double> center) {
  double c = center ? *center : weighted_average(u, p, beta, F);
  auto w = weight_values(u, p, beta, F);
  std::vector<double> terms(u.v.size());
  for (size_t i = 0; i < u.v.size(); ++i)
    terms[i] = w[i] * std::pow(std::fabs(u.v[i] - c), p);
  return std::pow(pairwise_sum(terms) * u.grid->cell_weight(), 1.0 / p);
}

double gagliardo(const Field& u, const KernelSpec& kernel, double p, const QuadOptions& opts) {
  PairQuad q(*u.grid, kernel, p, opts);
  return gagliardo_impl(u, q);
}

void pair_coefficients(const Grid& grid, const KernelSpec& kernel, double p,
                       const QuadOptions& opts,
                       const std::function<void(uint32_t, uint32_t, double)>& sink) {
  PairQuad q(grid, kernel, p, opts);
  const size_t N = grid.size();
  for (size_t i = 0; i < N; ++i) {
    std::array<double, kMaxDim> xi{};
    for (int k = 0; k < q.n; ++k) xi[k] = grid.mid(k)[i];
    for (size_t j = 0; j < N; ++j) {
      if (i == j) continue;
      double c;
      if (q.lattice_touching(i, j)) {
        c = q.near_coeff(i, j);
      } else {
        // straddle test as in the row kernels
        bool straddle = false;
        if (q.R2[i] >= 0.0) {
          double r2min = 0, r2max = 0;
          for (int k = 0; k < q.n; ++k) {
            double ad = std::fabs(grid.mid(k)[j] - xi[k]);
            double g = ad - q.halfwidth;
            if (g < 0) g = 0;
            double s = ad + q.halfwidth;
            r2min += g * g;
            r2max += s * s;
          }
          straddle = r2min < q.R2[i] && q.R2[i] < r2max;
        }
        if (straddle) {
          std::array<double, kMaxDim> lo_j{};
          for (int k = 0; k < q.n; ++k) lo_j[k] = grid.mid(k)[j] - q.halfwidth;
          c = q.wcell * q.wcell * q.A[i] *
              q.chi_coeff(xi, lo_j, q.h, q.R2[i], q.opts.chi_depth);
        } else {
          c = q.far_coeff(i, j);
        }
      }
      if (c != 0.0) sink(static_cast<uint32_t>(i), static_cast<uint32_t>(j), c);
    }
  }
}

namespace {

// Fragment-based double integral over a clipped region (localized variant).
struct Frag {
  BoxR box;
  std::array<double, kMaxDim> lo, hi, mid;
  double vol;
  double u;
};

bool frag_touch(const Frag& a, const Frag& b, int n) {
  constexpr double eps = 1e-12;
  for (int k = 0; k < n; ++k) {
    if (a.hi[k] < b.lo[k] - eps || b.hi[k] < a.lo[k] - eps) return false;
  }
  return true;
}

double frag_pair(const PairQuad& q, const std::array<double, kMaxDim>& alo,
                 const std::array<double, kMaxDim>& ahi, const std::array<double, kMaxDim>& blo,
                 const std::array<double, kMaxDim>& bhi, int level) {
  const int n = q.n;
  // touching?
  bool touch = true;
  constexpr double eps = 1e-12;
  for (int k = 0; k < n; ++k)
    if (ahi[k] < blo[k] - eps || bhi[k] < alo[k] - eps) touch = false;
  if (touch) {
    if (level >= q.opts.diag_depth) return 0.0;
    double sum = 0;
    std::array<double, kMaxDim> am{}, bm{};
    for (int k = 0; k < n; ++k) {
      am[k] = 0.5 * (alo[k] + ahi[k]);
      bm[k] = 0.5 * (blo[k] + bhi[k]);
    }
    for (int ca = 0; ca < (1 << n); ++ca) {
      std::array<double, kMaxDim> l1 = alo, h1 = am;
      for (int k = 0; k < n; ++k)
        if (ca & (1 << k)) {
          l1[k] = am[k];
          h1[k] = ahi[k];
        }
      for (int cb = 0; cb < (1 << n); ++cb) {
        std::array<double, kMaxDim> l2 = blo, h2 = bm;
        for (int k = 0; k < n; ++k)
          if (cb & (1 << k)) {
            l2[k] = bm[k];
            h2[k] = bhi[k];
          }
        sum += frag_pair(q, l1, h1, l2, h2, level + 1);
      }
    }
    return sum;
  }
  // midpoint term
  std::array<double, kMaxDim> x{}, y{};
  double r2 = 0, wa = 1, wb = 1;
  for (int k = 0; k < n; ++k) {
    x[k] = 0.5 * (alo[k] + ahi[k]);
    y[k] = 0.5 * (blo[k] + bhi[k]);
    double d = x[k] - y[k];
    r2 += d * d;
    wa *= ahi[k] - alo[k];
    wb *= bhi[k] - blo[k];
  }
  double db = q.grid.domain().boundary_distance_d(x);
  double dF = q.kernel.beta > 0.0 ? q.kernel.F->distance_d(x) : 0.0;
  auto xf = q.kernel.x_factors(q.grid.domain(), q.p, db, dF);
  if (xf.radius >= 0.0 && r2 > xf.radius * xf.radius) return 0.0;
  return wa * wb * xf.A * q.y_kern(r2);
}

double gagliardo_region_impl(const Field& u, const PairQuad& q, const BoxR& region) {
  const Grid& grid = *u.grid;
  const int n = q.n;
  std::vector<Frag> frags;
  for (size_t i = 0; i < grid.size(); ++i) {
    auto inter = grid.cell_box(i).intersection(region);
    if (!inter || inter->degenerate()) continue;
    Frag f;
    f.box = *inter;
    for (int k = 0; k < n; ++k) {
      f.lo[k] = f.box.lo.x[k].to_double();
      f.hi[k] = f.box.hi.x[k].to_double();
      f.mid[k] = 0.5 * (f.lo[k] + f.hi[k]);
    }
    f.vol = f.box.volume().to_double();
    f.u = u.v[i];
    frags.push_back(std::move(f));
  }
  std::vector<double> terms;
  for (size_t a = 0; a < frags.size(); ++a) {
    for (size_t b = 0; b < frags.size(); ++b) {
      if (a == b) continue;
      double dup = kern::du_pow(frags[a].u - frags[b].u, q.proto);
      if (dup == 0.0) continue;
      double c;
      if (frag_touch(frags[a], frags[b], n)) {
        c = frag_pair(q, frags[a].lo, frags[a].hi, frags[b].lo, frags[b].hi, 0);
      } else {
        double r2 = 0;
        for (int k = 0; k < n; ++k) {
          double d = frags[a].mid[k] - frags[b].mid[k];
          r2 += d * d;
        }
        double db = q.grid.domain().boundary_distance_d(frags[a].mid);
        double dF = q.kernel.beta > 0.0 ? q.kernel.F->distance_d(frags[a].mid) : 0.0;
        auto xf = q.kernel.x_factors(q.grid.domain(), q.p, db, dF);
        if (xf.radius >= 0.0 && r2 > xf.radius * xf.radius)
          c = 0.0;
        else
          c = frags[a].vol * frags[b].vol * xf.A * q.y_kern(r2);
      }
      if (c != 0.0) terms.push_back(dup * c);
    }
  }
  return pairwise_sum(terms);
}

}  // namespace

double gagliardo_region(const Field& u, const KernelSpec& kernel, double p, const BoxR& region,
                        const QuadOptions& opts) {
  PairQuad q(*u.grid, kernel, p, opts);
  return gagliardo_region_impl(u, q, region);
}

double localized_rhs(const Field& u, const TreeCovering& cov, const KernelSpec& kernel, double p,
                     const QuadOptions& opts) {
  PairQuad q(*u.grid, kernel, p, opts);
  std::vector<double> per_node(cov.size(), 0.0);
  parallel_blocks(static_cast<int>(cov.size()), [&](int t) {
    per_node[t] = gagliardo_region_impl(u, q, cov.U[t]);
  });
  return pairwise_sum(per_node);
}

const char* RatioRecord::csv_header() {
  return "domain,p,s,tau,beta,kernel,field_id,lhs,rhs,ratio,constant,pass";
}

std::string RatioRecord::csv_line() const {
  return domain + "," + fmt_g17(p) + "," + fmt_g17(s) + "," + fmt_g17(tau) + "," + fmt_g17(beta) +
         "," + kernel + "," + field_id + "," + fmt_g17(lhs) + "," + fmt_g17(rhs) + "," +
         fmt_g17(ratio) + "," + fmt_g17(constant) + "," + (pass ? "1" : "0");
}

RatioRecord verify_inequality(const Field& u, double p, const KernelSpec& kernel, double constant,
                              const TreeCovering* localized, const QuadOptions& opts) {
  RatioRecord rec;
  rec.domain = u.grid->domain().name;
  rec.kernel = kernel.label();
  rec.field_id = u.id;
  rec.p = p;
  rec.s = kernel.variant == KernelSpec::Variant::RadialPonce ? kernel.rho.s : kernel.s;
  rec.tau = kernel.has_cutoff() ? (kernel.variant == KernelSpec::Variant::RadialPonce ? 1.0
                                                                                      : kernel.tau)
                                : 0.0;
  rec.beta = kernel.beta;
  rec.constant = constant;

  const BoundarySet* F = kernel.F.get();
  rec.lhs = lp_norm(u, p, kernel.beta, F);
  double integral = localized ? localized_rhs(u, *localized, kernel, p, opts)
                              : gagliardo(u, kernel, p, opts);
  rec.rhs = std::pow(integral, 1.0 / p);

  if (rec.rhs > 0.0) {
    rec.ratio = rec.lhs / rec.rhs;
    rec.pass = rec.ratio <= constant;
  } else if (rec.lhs == 0.0) {
    rec.ratio = 0.0;
    rec.pass = true;
  } else {
    rec.ratio = std::numeric_limits<double>::infinity();
    rec.pass = false;
    rec.note = "counterexample candidate: rhs vanished with lhs > 0";
  }
  return rec;
}

}  // namespace fracpoin
