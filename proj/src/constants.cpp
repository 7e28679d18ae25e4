#include "fracpoin/constants.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "fracpoin/covering.hpp"
#include "fracpoin/util.hpp"

namespace fracpoin {

namespace {
double conj_exponent(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("constants: p > 1 required");
  return p / (p - 1.0);
}
}  // namespace

double c_np(int n, double p) {
  double q = conj_exponent(p);
  double inner = std::pow(2.0, 2.0 * q + 2.0) * std::pow(3.0, n * q) *
                 static_cast<double>(n) * static_cast<double>(n) * q / (q - 1.0);
  double root = std::sqrt(static_cast<double>(n) + 3.0);
  return 2.0 * std::pow(inner, 1.0 / q) * std::pow(1.0 + root, n) *
         std::pow(static_cast<double>(n) + 3.0, static_cast<double>(n) / (2.0 * p)) *
         std::pow(2.0 * static_cast<double>(n), 1.0 / p);
}

double c1_john(int n, double p, double s, double tau, double beta) {
  return c_np(n, p) * std::pow(tau, s - static_cast<double>(n)) * std::pow(2.0, beta);
}

double c1_cube(int n, double p, double s, double tau, double L) {
  return std::pow(static_cast<double>(n) + 3.0, static_cast<double>(n) / (2.0 * p)) *
         std::pow(tau * L, s);
}

double c1_ponce(int n, double p, double beta) {
  return std::pow(static_cast<double>(n), static_cast<double>(n) / (2.0 * p)) *
         std::pow(2.0, beta);
}

double c0_john(int n, double q, double beta, double K) {
  if (!(q > 1.0)) throw std::invalid_argument("c0: q > 1 required");
  if (!(K >= 1.0)) throw std::invalid_argument("c0: K >= 1 required");
  if (beta < 0.0) throw std::invalid_argument("c0: beta >= 0 required");
  return 4.0 * std::pow(12.0, 2.0 * n / q) * std::pow(72.0, n) *
         std::pow(3.0 * std::sqrt(static_cast<double>(n)), beta) *
         std::pow(q / (q - 1.0), 1.0 / q) * std::pow(K, static_cast<double>(n) + beta);
}

double c0_cube(int n, double q, double tau) {
  if (!(q > 1.0)) throw std::invalid_argument("c0: q > 1 required");
  double inner = std::pow(2.0, 2.0 * q + 2.0) * std::pow(3.0, n * q) *
                 static_cast<double>(n) * static_cast<double>(n) * q / (q - 1.0);
  return std::pow(inner, 1.0 / q) * std::pow(1.0 + std::sqrt(static_cast<double>(n) + 3.0), n) *
         std::pow(tau, -static_cast<double>(n));
}

double c2_weight(int n, double beta, double K) {
  return std::pow(3.0 * K * std::sqrt(static_cast<double>(n)), beta);
}

ConstantBreakdown breakdown_john(int n, double p, double s, double tau, double beta, double K) {
  ConstantBreakdown b;
  b.kind = "john";
  b.n = n;
  b.p = p;
  b.q = conj_exponent(p);
  b.s = s;
  b.tau = tau;
  b.beta = beta;
  b.K = K;
  b.N = 1;
  for (int k = 0; k < n; ++k) b.N *= 12;
  b.c_np = c_np(n, p);
  b.c1 = c1_john(n, p, s, tau, beta);
  b.c0 = c0_john(n, b.q, beta, K);
  b.c2 = c2_weight(n, beta, K);
  b.total = 2.0 * b.c0 * b.c1;
  return b;
}

ConstantBreakdown breakdown_cube(int n, double p, double s, double tau, double L) {
  ConstantBreakdown b;
  b.kind = "cube";
  b.n = n;
  b.p = p;
  b.q = conj_exponent(p);
  b.s = s;
  b.tau = tau;
  b.m = choose_m(n, tau);
  b.N = 2 * n;
  b.c_np = c_np(n, p);
  b.c1 = c1_cube(n, p, s, tau, L);
  b.c0 = c0_cube(n, b.q, tau);
  b.c2 = 1;
  b.total = 2.0 * b.c0 * b.c1;
  return b;
}

ConstantBreakdown breakdown_ponce(int n, double p, double beta, double K) {
  ConstantBreakdown b;
  b.kind = "ponce";
  b.n = n;
  b.p = p;
  b.q = conj_exponent(p);
  b.s = 0;
  b.tau = 1;
  b.beta = beta;
  b.K = K;
  b.N = 1;
  for (int k = 0; k < n; ++k) b.N *= 12;
  b.c_np = c_np(n, p);
  b.c1 = c1_ponce(n, p, beta);
  b.c0 = c0_john(n, b.q, beta, K);
  b.c2 = c2_weight(n, beta, K);
  b.total = 2.0 * b.c0 * b.c1;
  return b;
}

EstimateResult estimate_rayleigh(GridPtr grid, const KernelSpec& kernel, const QuadOptions& opts) {
  const double p = 2.0;
  const size_t N = grid->size();
  if (N > 6000) throw std::invalid_argument("estimate_rayleigh: grid too large for a dense pencil");

  // lhs^2 = u^T A u with the omega-weighted mean removed;
  // rhs^2 = u^T B u assembled from the pair coefficients.
  std::vector<double> omega(N, 1.0);
  if (kernel.beta > 0.0) {
    auto dF = distances_to(*grid, *kernel.F);
    for (size_t i = 0; i < N; ++i) omega[i] = std::pow(dF[i], p * kernel.beta);
  }
  const double wcell = grid->cell_weight();

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd wv(N);
  double wsum = 0;
  for (size_t i = 0; i < N; ++i) {
    wv[i] = omega[i] * wcell;
    wsum += wv[i];
  }
  for (size_t i = 0; i < N; ++i) A(i, i) = wv[i];
  A -= (wv * wv.transpose()) / wsum;

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, N);
  pair_coefficients(*grid, kernel, p, opts, [&](uint32_t i, uint32_t j, double c) {
    B(i, i) += c;
    B(j, j) += c;
    B(i, j) -= c;
    B(j, i) -= c;
  });

  // Constants span the null space of both forms; penalize them with a
  // rank-one mass term so B becomes definite, which leaves every nonzero
  // Rayleigh quotient unchanged.
  double bscale = B.trace() / static_cast<double>(N);
  if (!(bscale > 0.0))
    throw std::runtime_error("estimate_rayleigh: rhs form vanished (kernel sees no pairs)");
  Eigen::MatrixXd Breg = B + (bscale / (wsum * wsum)) * (wv * wv.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(Breg);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "estimate_rayleigh: rhs form is singular beyond the constants null space");

  Rng rng(12345);
  Eigen::VectorXd v(N);
  for (size_t i = 0; i < N; ++i) v[i] = rng.normal();
  auto deflate = [&](Eigen::VectorXd& x) {
    double c = wv.dot(x) / wsum;
    for (size_t i = 0; i < N; ++i) x[i] -= c;
  };
  deflate(v);
  v.normalize();

  EstimateResult res;
  res.method = "rayleigh";
  double lambda = 0;
  for (res.iterations = 1; res.iterations <= 1000; ++res.iterations) {
    Eigen::VectorXd av = A * v;
    Eigen::VectorXd next = llt.solve(av);
    deflate(next);
    double norm = next.norm();
    if (!(norm > 0)) break;
    next /= norm;
    v = next;
    av = A * v;
    Eigen::VectorXd bv = Breg * v;
    lambda = v.dot(av) / v.dot(bv);
    Eigen::VectorXd r = av - lambda * bv;
    res.residual = r.norm();
    if (res.residual <= 1e-8 * std::max(1.0, av.norm())) break;
  }
  res.value = std::sqrt(std::max(lambda, 0.0));
  res.certificate.grid = grid;
  res.certificate.v.assign(v.data(), v.data() + N);
  res.certificate.id = "rayleigh-certificate";
  return res;
}

EstimateResult estimate_random_search(GridPtr grid, const KernelSpec& kernel, double p, int budget,
                                      uint64_t seed, const QuadOptions& opts) {
  if (budget < 1) throw std::invalid_argument("estimate_random_search: budget >= 1 required");
  EstimateResult res;
  res.method = "random_search";
  res.seed = seed;

  auto score = [&](const Field& u) {
    RatioRecord rec =
        verify_inequality(u, p, kernel, std::numeric_limits<double>::infinity(), nullptr, opts);
    return rec.rhs > 0.0 ? rec.ratio : 0.0;
  };

  Rng rng(seed);
  Field best;
  double best_score = -1;
  int draws = std::max(1, budget / 2);
  for (int i = 0; i < draws; ++i) {
    Field f = make_band_limited(grid, seed * 1000003ULL + i);
    double sc = score(f);
    ++res.iterations;
    if (sc > best_score) {
      best_score = sc;
      best = f;
    }
  }
  // coordinate-wise refinement
  int remaining = budget - draws;
  double step = 0.5 * best.max_abs();
  while (remaining > 0 && step > 1e-4 * std::max(best.max_abs(), 1.0)) {
    size_t cell = rng.below(best.v.size());
    double dir = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    Field trial = best;
    trial.v[cell] += dir * step;
    double sc = score(trial);
    ++res.iterations;
    --remaining;
    if (sc > best_score) {
      best_score = sc;
      best = trial;
    } else {
      step *= 0.97;
    }
  }
  res.value = best_score;
  res.certificate = best;
  res.certificate.id = "search-certificate";
  return res;
}

std::vector<SweepRow> tau_sweep(DomainPtr domain, int whitney_generation, int grid_div, double p,
                                double s, double beta, std::shared_ptr<const BoundarySet> F,
                                const std::vector<double>& taus, const QuadOptions& opts) {
  auto dec = whitney_decompose(domain, whitney_generation);
  auto cov = john_tree_covering(dec);
  double K = boman_constant(*cov).K_d;
  auto grid = Grid::make(domain, grid_div);

  std::vector<SweepRow> rows;
  for (double tau : taus) {
    SweepRow row;
    row.tau = tau;
    row.theoretical = breakdown_john(domain->dim(), p, s, tau, beta, K).total;
    KernelSpec k = KernelSpec::weighted_main(s, tau, beta, F);
    if (p == 2.0) {
      row.empirical = estimate_rayleigh(grid, k, opts).value;
    } else {
      row.empirical = estimate_random_search(grid, k, p, 100, 7, opts).value;
    }
    row.slack = row.theoretical - row.empirical;
    rows.push_back(row);
  }
  return rows;
}

std::vector<RoomsProbeRow> rooms_probe(int k, const std::vector<int>& js, double s, double tau,
                                       int grid_div, const QuadOptions& opts) {
  std::vector<RoomsProbeRow> rows;
  for (int j : js) {
    DomainSpec spec;
    spec.family = DomainSpec::Family::RoomsAndCorridors;
    spec.rooms_k = k;
    spec.corridor_widths.assign(k - 1, Rat(1, int64_t{1} << j));
    auto domain = build_domain(spec);
    auto grid = Grid::make(domain, grid_div);
    KernelSpec kernel = KernelSpec::tau_ball(s, tau);
    RoomsProbeRow row;
    row.j = j;
    row.estimate = estimate_rayleigh(grid, kernel, opts).value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fracpoin
