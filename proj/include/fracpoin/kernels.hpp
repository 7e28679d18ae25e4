#pragma once

// The four double-integral kernel families mu(x, y) and their pointwise
// evaluation, split into per-x factors (weights, cutoff radius) and the
// radial y-part so the pair loops can hoist everything that only depends
// on the source cell.

#include <memory>
#include <optional>
#include <string>

#include "fracpoin/geometry.hpp"

namespace fracpoin {

struct RhoSpec {
  enum class Kind { Power, Logarithmic, Plateau };
  Kind kind = Kind::Power;
  double s = 0.5;   // exponent of the power part
  double c = 1.0;   // plateau cap
};

double rho_eval(const RhoSpec& rho, double r);
// Monotonicity precheck on a 1000-point grid; throws when not nondecreasing.
void rho_validate(const RhoSpec& rho, double max_radius);

struct KernelSpec {
  enum class Variant {
    Classical,     // |x-y|^-(n+sp)
    TauBall,       // chi_{B(x, tau d(x))}(y) |x-y|^-(n+sp)
    WeightedMain,  // d(x)^{ps} d_F(x)^{p beta} chi_{B(x, tau d(x))}(y) |x-y|^-(n+sp)
    RadialPonce    // rho(2d(x))^p d_F(x)^{p beta} chi_{B(x, d(x))}(y) / (|x-y|^n rho(|x-y|)^p)
  };

  Variant variant = Variant::Classical;
  double s = 0.5;
  double tau = 0.5;
  double beta = 0.0;
  RhoSpec rho{};
  std::shared_ptr<const BoundarySet> F;  // required when beta > 0

  static KernelSpec classical(double s);
  static KernelSpec tau_ball(double s, double tau);
  static KernelSpec weighted_main(double s, double tau, double beta,
                                  std::shared_ptr<const BoundarySet> F);
  static KernelSpec radial_ponce(RhoSpec rho, double beta, std::shared_ptr<const BoundarySet> F);

  void validate() const;  // parameter ranges
  std::string label() const;
  bool has_cutoff() const { return variant != Variant::Classical; }
  // alpha with kern(r) = r^-alpha; RadialPonce power rho reduces to this,
  // other rho kinds use the generic y-part below.
  bool power_law() const {
    return variant != Variant::RadialPonce || rho.kind == RhoSpec::Kind::Power;
  }
  double alpha(int n, double p) const {
    double ss = variant == Variant::RadialPonce ? rho.s : s;
    return static_cast<double>(n) + ss * p;
  }

  // Per-x data: multiplicative factor A(x) and cutoff radius (negative when
  // the kernel has no indicator).
  struct XFactors {
    double A = 1;
    double radius = -1;
  };
  XFactors x_factors(const RectilinearDomain& dom, double p, double dist_b, double dist_F) const;

  // Radial y-part for non-power-law rho: value of 1/(r^n rho(r)^p).
  double y_part(int n, double p, double r) const;

  // Full pointwise integrand factor mu(x, y); used by oracles and the
  // kernel-coincidence checks.
  double mu(const RectilinearDomain& dom, const std::array<double, kMaxDim>& x,
            const std::array<double, kMaxDim>& y, double p,
            std::optional<double> dist_b = std::nullopt,
            std::optional<double> dist_F = std::nullopt) const;
};

}  // namespace fracpoin
