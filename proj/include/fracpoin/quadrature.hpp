#pragma once

// Quadrature of weighted L^p norms, weighted averages and the Gagliardo-type
// double integrals, plus direct verification of the Poincare-type
// inequalities.
//
// Cell-pair semantics: fields are piecewise constant on the grid, far pairs
// use the midpoint rule, touching pairs are refined by 4^n-fold recursive
// subdivision to depth diag_depth (the within-cell contribution vanishes),
// and cells straddling a ball indicator boundary are split chi_depth times.

#include <functional>
#include <optional>
#include <string>

#include "fracpoin/covering.hpp"
#include "fracpoin/field.hpp"
#include "fracpoin/kernels.hpp"

namespace fracpoin {

struct QuadOptions {
  int diag_depth = 3;  // recursion depth for touching cell pairs
  int chi_depth = 1;   // splits of cells straddling the indicator boundary
};

double weighted_average(const Field& u, double p, double beta, const BoundarySet* F);
double lp_norm(const Field& u, double p, double beta, const BoundarySet* F,
               std::optional<double> center = std::nullopt);

// The raw double integral over all ordered cell pairs.
double gagliardo(const Field& u, const KernelSpec& kernel, double p,
                 const QuadOptions& opts = {});

// Double integral restricted to region x region (both variables), used for
// the localized right-hand sides; cells are clipped exactly to the region.
double gagliardo_region(const Field& u, const KernelSpec& kernel, double p, const BoxR& region,
                        const QuadOptions& opts = {});

// Sum over tree nodes of the U_t x U_t double integrals.
double localized_rhs(const Field& u, const TreeCovering& cov, const KernelSpec& kernel, double p,
                     const QuadOptions& opts = {});

// Ordered-pair coefficients c_ij with
//   gagliardo(u) == sum_{i != j} c_ij |u_i - u_j|^p
// up to summation order; used to assemble quadratic forms.
void pair_coefficients(const Grid& grid, const KernelSpec& kernel, double p,
                       const QuadOptions& opts,
                       const std::function<void(uint32_t, uint32_t, double)>& sink);

struct RatioRecord {
  std::string domain, kernel, field_id;
  double p = 2, s = 0, tau = 0, beta = 0;
  double lhs = 0, rhs = 0, ratio = 0, constant = 0;
  bool pass = false;
  std::string note;

  static const char* csv_header();  // domain,p,s,tau,beta,kernel,field_id,lhs,rhs,ratio,constant,pass
  std::string csv_line() const;
};

RatioRecord verify_inequality(const Field& u, double p, const KernelSpec& kernel, double constant,
                              const TreeCovering* localized = nullptr,
                              const QuadOptions& opts = {});

}  // namespace fracpoin
