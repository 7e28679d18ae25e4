#pragma once

// Dyadic Whitney decompositions of rectilinear domains: construction by
// recursive subdivision, the 9/8-expanded cube family, and an exact
// verifier for the size/neighbor properties.

#include <memory>
#include <string>
#include <vector>

#include "fracpoin/geometry.hpp"

namespace fracpoin {

struct WhitneyDecomposition {
  DomainPtr domain;
  int max_generation = 0;
  std::vector<Cube> cubes;          // closed cubes with disjoint interiors
  std::vector<int> generation;      // side = cell_size * 2^-generation
  std::vector<std::vector<int32_t>> neighbors;  // closures intersect
  Rat uncovered;                    // measure of the truncated boundary collar

  size_t size() const { return cubes.size(); }
};

using WhitneyPtr = std::shared_ptr<const WhitneyDecomposition>;

// Standard dyadic algorithm: subdivide from a lattice-aligned bounding cube,
// accept a cube once diam <= dist(., boundary); the parent was rejected so
// dist <= 4 diam follows. Truncation below generation `max_generation`
// leaves an uncovered collar whose exact measure is recorded.
WhitneyPtr whitney_decompose(DomainPtr domain, int max_generation);

// Q*_t = (9/8) Q_t, open and concentric.
std::vector<Cube> expand_cubes(const WhitneyDecomposition& dec);

struct WhitneyReport {
  bool disjoint_interiors = false;
  bool volume_identity = false;   // sum |Q_t| + uncovered == |domain|
  bool contained = false;         // every cube inside the closed domain
  bool size_bounds = false;       // diam <= dist <= 4 diam, exact
  bool neighbor_ratios = false;   // neighbor diam ratio within [1/4, 4], exact
  bool neighbor_count = false;    // <= 12^n neighbors
  bool collar_bound = false;      // uncovered below the truncation estimate
  double worst_dist_over_diam_lo = 0;  // min of dist/diam over cubes
  double worst_dist_over_diam_hi = 0;  // max of dist/diam over cubes
  double worst_neighbor_ratio = 0;
  int max_neighbors = 0;
  Rat uncovered;
  std::vector<std::string> failures;

  bool pass() const {
    return disjoint_interiors && volume_identity && contained && size_bounds &&
           neighbor_ratios && neighbor_count;
  }
};

WhitneyReport verify_whitney(const WhitneyDecomposition& dec);

}  // namespace fracpoin
