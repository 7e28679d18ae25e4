#pragma once

// Closed-form evaluation of every constant appearing in the inequalities,
// and empirical lower-bound estimation of sharp constants via a Rayleigh
// pencil (p = 2) or seeded random search (general p).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracpoin/field.hpp"
#include "fracpoin/kernels.hpp"
#include "fracpoin/quadrature.hpp"

namespace fracpoin {

struct ConstantBreakdown {
  int n = 2;
  double p = 2, q = 2, s = 0.5, tau = 0.5, beta = 0, K = 1;
  int64_t N = 0;
  int m = 0;
  double c_np = 0;
  double c1 = 0;
  double c0 = 0;
  double c2 = 0;
  double total = 0;  // 2 c0 c1
  std::string kind;  // "john", "cube", "ponce"
};

double c_np(int n, double p);
double c1_john(int n, double p, double s, double tau, double beta);
double c1_cube(int n, double p, double s, double tau, double L);
double c1_ponce(int n, double p, double beta);
double c0_john(int n, double q, double beta, double K);
double c0_cube(int n, double q, double tau);
double c2_weight(int n, double beta, double K);

ConstantBreakdown breakdown_john(int n, double p, double s, double tau, double beta, double K);
ConstantBreakdown breakdown_cube(int n, double p, double s, double tau, double L);
ConstantBreakdown breakdown_ponce(int n, double p, double beta, double K);

struct EstimateResult {
  double value = 0;        // empirical lower bound on the sharp constant
  Field certificate;       // maximizing grid field
  int iterations = 0;
  double residual = 0;
  std::string method;
  uint64_t seed = 0;
};

// p = 2: largest generalized Rayleigh quotient of (lhs^2 form, rhs^2 form)
// on the grid, constants deflated, solved by inverse power iteration.
EstimateResult estimate_rayleigh(GridPtr grid, const KernelSpec& kernel,
                                 const QuadOptions& opts = {});

// Any p > 1: best ratio over seeded band-limited draws plus coordinate-wise
// refinement within the budget.
EstimateResult estimate_random_search(GridPtr grid, const KernelSpec& kernel, double p, int budget,
                                      uint64_t seed, const QuadOptions& opts = {});

struct SweepRow {
  double tau = 0;
  double theoretical = 0;
  double empirical = 0;
  double slack = 0;  // theoretical - empirical
};

// Per tau: theoretical 2 c0 c1 with the module-computed K of the domain's
// covering, and the empirical estimate on the given grid.
std::vector<SweepRow> tau_sweep(DomainPtr domain, int whitney_generation, int grid_div, double p,
                                double s, double beta, std::shared_ptr<const BoundarySet> F,
                                const std::vector<double>& taus, const QuadOptions& opts = {});

struct RoomsProbeRow {
  int j = 0;          // corridor width 2^-j
  double estimate = 0;
};

std::vector<RoomsProbeRow> rooms_probe(int k, const std::vector<int>& js, double s, double tau,
                                       int grid_div, const QuadOptions& opts = {});

}  // namespace fracpoin
