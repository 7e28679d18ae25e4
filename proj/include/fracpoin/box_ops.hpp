#pragma once

// Exact operations on finite box arrangements: union volume by coordinate
// compression, pairwise disjointness/touching sweeps and max stabbing count.

#include <optional>
#include <utility>
#include <vector>

#include "fracpoin/geometry.hpp"

namespace fracpoin {

Rat union_volume(const std::vector<BoxR>& boxes);

// First pair of boxes whose interiors intersect, if any.
std::optional<std::pair<int, int>> interiors_intersect_witness(const std::vector<BoxR>& boxes);

// All pairs (i < j) whose closures intersect.
std::vector<std::pair<int, int>> touching_pairs(const std::vector<BoxR>& boxes);

// Max over the arrangement of the number of covering boxes.
int max_overlap(const std::vector<BoxR>& boxes);

}  // namespace fracpoin
