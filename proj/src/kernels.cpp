#include "fracpoin/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "fracpoin/util.hpp"

namespace fracpoin {

double rho_eval(const RhoSpec& rho, double r) {
  switch (rho.kind) {
    case RhoSpec::Kind::Power:
      return std::pow(r, rho.s);
    case RhoSpec::Kind::Logarithmic: {
      double logp = r < 1.0 ? std::log(1.0 / r) : 0.0;
      return std::pow(r, rho.s) / (1.0 + logp);
    }
    case RhoSpec::Kind::Plateau:
      return std::min(std::pow(r, rho.s), rho.c);
  }
  return 0;
}

void rho_validate(const RhoSpec& rho, double max_radius) {
  if (!(rho.s > 0.0 && rho.s < 1.0)) throw std::invalid_argument("rho: s must lie in (0,1)");
  if (rho.kind == RhoSpec::Kind::Plateau && !(rho.c > 0.0))
    throw std::invalid_argument("rho: plateau cap must be positive");
  double prev = 0;
  for (int i = 1; i <= 1000; ++i) {
    double r = max_radius * static_cast<double>(i) / 1000.0;
    double v = rho_eval(rho, r);
    if (!(v > 0.0) || v + 1e-15 < prev)
      throw std::invalid_argument("rho: must be positive and nondecreasing");
    prev = v;
  }
}

KernelSpec KernelSpec::classical(double s) {
  KernelSpec k;
  k.variant = Variant::Classical;
  k.s = s;
  k.validate();
  return k;
}

KernelSpec KernelSpec::tau_ball(double s, double tau) {
  KernelSpec k;
  k.variant = Variant::TauBall;
  k.s = s;
  k.tau = tau;
  k.validate();
  return k;
}

KernelSpec KernelSpec::weighted_main(double s, double tau, double beta,
                                     std::shared_ptr<const BoundarySet> F) {
  KernelSpec k;
  k.variant = Variant::WeightedMain;
  k.s = s;
  k.tau = tau;
  k.beta = beta;
  k.F = std::move(F);
  k.validate();
  return k;
}

KernelSpec KernelSpec::radial_ponce(RhoSpec rho, double beta,
                                    std::shared_ptr<const BoundarySet> F) {
  KernelSpec k;
  k.variant = Variant::RadialPonce;
  k.rho = rho;
  k.beta = beta;
  k.F = std::move(F);
  k.validate();
  return k;
}

void KernelSpec::validate() const {
  if (variant != Variant::RadialPonce && !(s > 0.0 && s < 1.0))
    throw std::invalid_argument("kernel: s must lie in (0,1)");
  if ((variant == Variant::TauBall || variant == Variant::WeightedMain) &&
      !(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("kernel: tau must lie in (0,1)");
  if (beta < 0.0) throw std::invalid_argument("kernel: beta must be nonnegative");
  if (beta > 0.0 && !F) throw std::invalid_argument("kernel: beta > 0 requires a boundary set F");
  if (variant == Variant::RadialPonce) rho_validate(rho, 4.0);
}

std::string KernelSpec::label() const {
  switch (variant) {
    case Variant::Classical:
      return "classical(s=" + fmt_g17(s) + ")";
    case Variant::TauBall:
      return "tauball(s=" + fmt_g17(s) + ";tau=" + fmt_g17(tau) + ")";
    case Variant::WeightedMain:
      return "weighted(s=" + fmt_g17(s) + ";tau=" + fmt_g17(tau) + ";beta=" + fmt_g17(beta) + ")";
    case Variant::RadialPonce: {
      const char* kind = rho.kind == RhoSpec::Kind::Power        ? "power"
                         : rho.kind == RhoSpec::Kind::Logarithmic ? "log"
                                                                  : "plateau";
      return std::string("ponce(rho=") + kind + ";s=" + fmt_g17(rho.s) +
             ";beta=" + fmt_g17(beta) + ")";
    }
  }
  return "?";
}

KernelSpec::XFactors KernelSpec::x_factors(const RectilinearDomain& dom, double p, double dist_b,
                                           double dist_F) const {
  (void)dom;
  XFactors xf;
  switch (variant) {
    case Variant::Classical:
      break;
    case Variant::TauBall:
      xf.radius = tau * dist_b;
      break;
    case Variant::WeightedMain:
      xf.A = std::pow(dist_b, p * s);
      if (beta > 0.0) xf.A *= std::pow(dist_F, p * beta);
      xf.radius = tau * dist_b;
      break;
    case Variant::RadialPonce: {
      double r = rho_eval(rho, 2.0 * dist_b);
      xf.A = std::pow(r, p);
      if (beta > 0.0) xf.A *= std::pow(dist_F, p * beta);
      xf.radius = dist_b;
      break;
    }
  }
  return xf;
}

double KernelSpec::y_part(int n, double p, double r) const {
  if (power_law()) return std::pow(r, -alpha(n, p));
  double denom = std::pow(r, static_cast<double>(n)) * std::pow(rho_eval(rho, r), p);
  return 1.0 / denom;
}

double KernelSpec::mu(const RectilinearDomain& dom, const std::array<double, kMaxDim>& x,
                      const std::array<double, kMaxDim>& y, double p,
                      std::optional<double> dist_b, std::optional<double> dist_F) const {
  const int n = dom.dim();
  double db = dist_b ? *dist_b : dom.boundary_distance_d(x);
  double dF = 0;
  if (beta > 0.0) dF = dist_F ? *dist_F : F->distance_d(x);
  XFactors xf = x_factors(dom, p, db, dF);
  double r2 = 0;
  for (int k = 0; k < n; ++k) {
    double d = x[k] - y[k];
    r2 += d * d;
  }
  double r = std::sqrt(r2);
  if (xf.radius >= 0.0 && r > xf.radius) return 0.0;
  return xf.A * y_part(n, p, r);
}

}  // namespace fracpoin
