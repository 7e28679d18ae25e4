#pragma once

// Scalar functions sampled on a uniform quadrature grid over the domain,
// with cell-midpoint semantics and exact cell geometry, plus the named
// field families used by the verification commands.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "fracpoin/geometry.hpp"
#include "fracpoin/util.hpp"

namespace fracpoin {

class Grid {
 public:
  // Every domain cell is subdivided `div` times per axis.
  static std::shared_ptr<const Grid> make(DomainPtr domain, int div);

  const RectilinearDomain& domain() const { return *dom_; }
  DomainPtr domain_ptr() const { return dom_; }
  int div() const { return div_; }
  int dim() const { return n_; }
  size_t size() const { return gcoord_.size(); }
  const Rat& h() const { return h_; }            // grid cell side
  double h_d() const { return h_d_; }
  double cell_weight() const { return w_; }      // h^n
  const Rat& cell_weight_exact() const { return w_exact_; }

  // Structure-of-arrays midpoints for the pair kernels.
  const std::vector<double>& mid(int axis) const { return mid_[axis]; }
  std::array<double, kMaxDim> mid_point(size_t i) const {
    std::array<double, kMaxDim> p{};
    for (int k = 0; k < n_; ++k) p[k] = mid_[k][i];
    return p;
  }
  const std::array<int64_t, kMaxDim>& gcoord(size_t i) const { return gcoord_[i]; }

  PointR midpoint_exact(size_t i) const;
  BoxR cell_box(size_t i) const;

  // Midpoint distance to the boundary, cached (exact squared distance,
  // rounded once by sqrt).
  const std::vector<double>& dist_boundary() const { return dist_b_; }

  int64_t lookup(const std::array<int64_t, kMaxDim>& g) const;  // -1 when absent

 private:
  DomainPtr dom_;
  int div_ = 1, n_ = 2;
  Rat h_;
  double h_d_ = 0, w_ = 0;
  Rat w_exact_;
  std::vector<std::array<int64_t, kMaxDim>> gcoord_;  // global lattice coords, sorted
  std::array<std::vector<double>, kMaxDim> mid_;
  std::vector<double> dist_b_;
};

using GridPtr = std::shared_ptr<const Grid>;

struct Field {
  GridPtr grid;
  std::vector<double> v;
  std::string id;

  double integral() const {
    double s = 0;
    for (double x : v) s += x;
    return s * grid->cell_weight();
  }
  double max_abs() const {
    double s = 0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
  }
};

// Midpoint distances to a boundary set, cached per call site.
std::vector<double> distances_to(const Grid& grid, const BoundarySet& F);

// Named families.
Field make_constant(GridPtr grid, double c);
Field make_coordinate(GridPtr grid, int axis);
Field make_band_limited(GridPtr grid, uint64_t seed, int modes = 6, double max_freq = 2.0);
Field make_radial_bump(GridPtr grid, std::array<double, kMaxDim> center, double sigma);
Field make_chebyshev(GridPtr grid, const std::vector<int>& degree);
Field make_uniform_random(GridPtr grid, uint64_t seed);  // values in [0,1)

// Subtracts the plain average so the result integrates to zero.
void remove_mean(Field& f);

// Parses "random:<count>", "coord:<axis>", "bump", "cheb:<deg>"; returns the
// generated batch (count 1 unless specified).
std::vector<Field> make_field_batch(GridPtr grid, const std::string& spec, uint64_t seed);

}  // namespace fracpoin
