#pragma once

// Exact representation of bounded rectilinear domains, cubes, compact
// boundary subsets and the distance functions d(x) and d_F(x).
//
// Domains are finite unions of axis-aligned grid cells (optionally cut by
// slit faces of the same lattice), so boundary distances reduce to exact
// point-to-face formulas. All containment/disjointness predicates are
// decided in rational arithmetic; floating point appears only when a
// distance is finally handed to quadrature.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fracpoin/rational.hpp"

namespace fracpoin {

inline constexpr int kMaxDim = 4;

using CellIndex = std::array<int64_t, kMaxDim>;

struct PointR {
  std::array<Rat, kMaxDim> x{};
  int n = 0;

  static PointR make(int n) {
    PointR p;
    p.n = n;
    return p;
  }
  static PointR of(std::initializer_list<Rat> coords) {
    PointR p;
    p.n = 0;
    for (const Rat& c : coords) p.x[p.n++] = c;
    return p;
  }
  std::array<double, kMaxDim> to_double() const {
    std::array<double, kMaxDim> d{};
    for (int k = 0; k < n; ++k) d[k] = x[k].to_double();
    return d;
  }
};

// Axis-aligned box, possibly degenerate in one or more axes (faces, edges
// and points are all boxes with lo == hi along the degenerate axes).
struct BoxR {
  PointR lo, hi;
  int n = 0;

  static BoxR make(const PointR& lo, const PointR& hi);
  Rat side(int k) const { return hi.x[k] - lo.x[k]; }
  Rat volume() const;              // product of side lengths
  Rat sq_half_diam() const;        // |half diagonal|^2
  PointR center() const;
  bool degenerate() const;
  bool contains_closed(const PointR& p) const;
  bool contains_open(const PointR& p) const;
  bool contains_box(const BoxR& other) const;  // closed containment
  bool intersects_closed(const BoxR& other) const;
  bool intersects_open(const BoxR& other) const;
  std::optional<BoxR> intersection(const BoxR& other) const;
  BoxR scaled_about_center(const Rat& factor) const;
};

struct Cube {
  PointR corner;
  Rat side;
  int n = 0;

  static Cube make(const PointR& corner, const Rat& side);
  BoxR box() const;
  PointR center() const;
  Rat sq_diam() const { return side * side * Rat(n); }
  Cube dilated(const Rat& k) const;  // same center, side*k
};

Rat sq_dist_point_box(const PointR& p, const BoxR& b);
Rat sq_dist_box_box(const BoxR& a, const BoxR& b);

// A lattice face between `cell` and `cell + e_axis`, used to describe slits.
struct LatticeFace {
  int axis = 0;
  CellIndex cell{};
};

class RectilinearDomain {
 public:
  // Cells are indices on the cell_size lattice; the domain is the interior
  // of their union minus the slit faces. Throws on an empty or disconnected
  // cell set, or on a slit that is not an interior lattice face.
  RectilinearDomain(int n, Rat cell_size, std::vector<CellIndex> cells,
                    std::vector<LatticeFace> slits = {});

  int dim() const { return n_; }
  const Rat& cell_size() const { return cell_size_; }
  const std::vector<CellIndex>& cells() const { return cells_; }
  const std::vector<LatticeFace>& slits() const { return slits_; }
  Rat volume() const;
  BoxR bounding_box() const;
  BoxR cell_box(const CellIndex& c) const;
  bool has_cell(const CellIndex& c) const;

  // Boundary faces of the cell complex; slit faces are listed once but
  // bound the domain from both sides.
  const std::vector<BoxR>& boundary_faces() const { return boundary_; }
  size_t boundary_face_count() const { return boundary_.size() + slit_face_count_; }

  bool contains_closed(const PointR& p) const;
  bool contains_open(const PointR& p) const;
  // Double-precision containment for Monte Carlo probes (lattice-grazing
  // points may land either way).
  bool contains_closed_d(const std::array<double, kMaxDim>& p) const;

  Rat boundary_sq_dist(const PointR& p) const;
  Rat boundary_sq_dist_box(const BoxR& b) const;
  double boundary_distance(const PointR& p) const;  // requires p in the open domain
  double boundary_distance_unchecked(const PointR& p) const;

  // Fast double-precision distance for Monte Carlo probes.
  double boundary_distance_d(const std::array<double, kMaxDim>& p) const;

  std::string name;  // optional label carried into reports

 private:
  void build_boundary();
  bool slit_between(const CellIndex& a, int axis) const;

  int n_;
  Rat cell_size_;
  std::vector<CellIndex> cells_;  // sorted, unique
  std::vector<LatticeFace> slits_;
  std::vector<BoxR> boundary_;
  std::vector<std::array<double, 2 * kMaxDim>> boundary_d_;  // lo/hi per face
  size_t slit_face_count_ = 0;
};

using DomainPtr = std::shared_ptr<const RectilinearDomain>;

// Compact subset of the boundary: a finite union of closed axis-aligned
// faces/edges/points, each verified to lie on the boundary of the domain.
class BoundarySet {
 public:
  BoundarySet(const RectilinearDomain& domain, std::vector<BoxR> segments);

  const std::vector<BoxR>& segments() const { return segments_; }
  Rat sq_dist(const PointR& p) const;
  double distance(const PointR& p) const;
  double distance_d(const std::array<double, kMaxDim>& p) const;

  // Common choices used throughout the test suites.
  static BoundarySet corner(const RectilinearDomain& domain);      // lowest boundary vertex
  static BoundarySet one_edge(const RectilinearDomain& domain);    // one full boundary face
  static BoundarySet whole_boundary(const RectilinearDomain& domain);

  std::string name;

 private:
  std::vector<BoxR> segments_;
  std::vector<std::array<double, 2 * kMaxDim>> segments_d_;
};

// Named domain families.
struct DomainSpec {
  enum class Family { Square, LShape, SlitSquare, RoomsAndCorridors, Explicit };
  Family family = Family::Square;
  Rat square_side = Rat(1);
  int rooms_k = 2;
  std::vector<Rat> corridor_widths;
  // Explicit:
  int n = 2;
  Rat cell_size = Rat(1);
  std::vector<CellIndex> cells;
  std::vector<LatticeFace> slits;
};

DomainPtr build_domain(const DomainSpec& spec);
DomainPtr build_domain_named(const std::string& family);  // "square", "l_shape", "slit_square", ...

}  // namespace fracpoin
