#pragma once

// Tree coverings: the regular m^n chain covering of a cube and the
// expanded-Whitney covering of a John-type domain, together with shadows,
// the overlap bound N, the Boman constant K and exact verification.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fracpoin/box_ops.hpp"
#include "fracpoin/geometry.hpp"
#include "fracpoin/whitney.hpp"

namespace fracpoin {

struct TreeCovering {
  enum class Kind { Cube, John };
  Kind kind = Kind::Cube;
  int n = 0;

  // Cube coverings keep the base cube and partition parameter m;
  // John coverings keep the Whitney decomposition they came from.
  Cube base_cube = Cube{};
  int m = 0;
  double tau = 0;
  WhitneyPtr dec;

  int root = 0;
  std::vector<int32_t> parent;                 // parent[root] == -1
  std::vector<std::vector<int32_t>> children;  // sorted
  std::vector<int32_t> level;

  std::vector<BoxR> U;  // open covering sets
  std::vector<BoxR> V;  // disjoint base pieces, V_t subset of U_t
  std::vector<BoxR> B;  // transfer cubes, B[root] unused
  int64_t overlap_N = 0;

  // DFS (preorder) layout: the subtree of t is dfs_order[dfs_pos[t] ..
  // subtree_end[t]).
  std::vector<int32_t> dfs_order, dfs_pos, subtree_end;

  size_t size() const { return U.size(); }
  Rat covered_volume() const {
    Rat v(0);
    for (const auto& b : V) v += b.volume();
    return v;
  }
  std::vector<BoxR> shadow_boxes(int t) const {
    std::vector<BoxR> out;
    for (int32_t i = dfs_pos[t]; i < subtree_end[t]; ++i) out.push_back(U[dfs_order[i]]);
    return out;
  }
};

using CoveringPtr = std::shared_ptr<const TreeCovering>;

// Rebuilds children, DFS layout and levels from the parent map; used after
// constructing a covering by hand.
void finalize_tree(TreeCovering& cov);

// Unique integer in (sqrt(n+3)/tau, 1 + sqrt(n+3)/tau].
int choose_m(int n, double tau);

// Regular m^n partition with the axis-ordered minimal chains; m is derived
// from tau via choose_m. m == 1 yields the trivial single-node covering.
CoveringPtr cube_tree_covering(const Cube& q, double tau);
CoveringPtr cube_tree_covering_m(const Cube& q, int m, double tau = 0);

// Expanded-Whitney covering over the shortest-path forest of the
// face-adjacency graph. Throws std::runtime_error listing components when
// that graph is disconnected.
CoveringPtr john_tree_covering(WhitneyPtr dec, std::optional<PointR> root_hint = std::nullopt);

struct Shadow {
  int node = 0;
  std::vector<BoxR> boxes;
  Rat volume;
};

Shadow shadow(const TreeCovering& cov, int t);
std::vector<Rat> shadow_volumes(const TreeCovering& cov);

struct BomanResult {
  Rat K;        // smallest dilation with W_t inside K*Q_t for every t
  double K_d = 1;
  int argmax = 0;
};

BomanResult boman_constant(const TreeCovering& cov);

struct CoveringReport {
  bool tree_ok = false;
  bool overlap_ok = false;       // 1 <= sum chi_{U_t} <= N
  bool transfer_ok = false;      // B_t pairwise disjoint, inside U_t cap U_{t_p}
  bool partition_ok = false;     // V_t disjoint, V_t subset of U_t
  bool eccentricity_ok = false;  // |W_t|/|B_t| within the kind-specific bound
  int measured_overlap = 0;
  double max_eccentricity = 0;
  double K = 1;
  std::vector<std::string> failures;

  bool pass() const {
    return tree_ok && overlap_ok && transfer_ok && partition_ok && eccentricity_ok;
  }
};

CoveringReport verify_tree_covering(const TreeCovering& cov);

// Certified check of sup_{W_t} d_F <= 3 K sqrt(n) inf_{B_t} d_F per node,
// using the 1-Lipschitz bound of d_F on recursively refined boxes.
struct WeightComparabilityReport {
  bool pass = false;
  double worst_ratio = 0;  // certified upper bound of sup/inf, max over nodes
  double bound = 0;        // 3 K sqrt(n)
  int worst_node = -1;
};

WeightComparabilityReport weight_comparability(const TreeCovering& cov, const BoundarySet& F,
                                               double K);

}  // namespace fracpoin
