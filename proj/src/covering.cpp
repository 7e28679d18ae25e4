#include "fracpoin/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace fracpoin {

void finalize_tree(TreeCovering& cov) {
  const int m = static_cast<int>(cov.parent.size());
  cov.children.assign(m, {});
  for (int t = 0; t < m; ++t)
    if (t != cov.root) cov.children[cov.parent[t]].push_back(t);
  for (auto& ch : cov.children) std::sort(ch.begin(), ch.end());

  cov.dfs_order.clear();
  cov.dfs_order.reserve(m);
  cov.dfs_pos.assign(m, -1);
  cov.subtree_end.assign(m, -1);
  // iterative preorder
  std::vector<std::pair<int32_t, size_t>> stack;
  stack.emplace_back(cov.root, 0);
  cov.dfs_pos[cov.root] = 0;
  cov.dfs_order.push_back(cov.root);
  while (!stack.empty()) {
    auto& [t, ci] = stack.back();
    if (ci < cov.children[t].size()) {
      int32_t c = cov.children[t][ci++];
      cov.dfs_pos[c] = static_cast<int32_t>(cov.dfs_order.size());
      cov.dfs_order.push_back(c);
      stack.emplace_back(c, 0);
    } else {
      cov.subtree_end[t] = static_cast<int32_t>(cov.dfs_order.size());
      stack.pop_back();
    }
  }
  cov.level.assign(m, 0);
  for (int32_t i = 1; i < m; ++i) {
    int32_t t = cov.dfs_order[i];
    cov.level[t] = cov.level[cov.parent[t]] + 1;
  }
}

int choose_m(int n, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("choose_m: tau must lie in (0,1)");
  double x = std::sqrt(static_cast<double>(n) + 3.0) / tau;
  int m = static_cast<int>(std::floor(x)) + 1;
  // floor may land wrong only when x is within an ulp of an integer
  while (static_cast<double>(m) <= x) ++m;
  while (static_cast<double>(m - 1) > x) --m;
  return m;
}

CoveringPtr cube_tree_covering(const Cube& q, double tau) {
  return cube_tree_covering_m(q, choose_m(q.n, tau), tau);
}

CoveringPtr cube_tree_covering_m(const Cube& q, int m, double tau) {
  if (m < 1) throw std::invalid_argument("cube_tree_covering: m >= 1 required");
  const int n = q.n;
  auto cov = std::make_shared<TreeCovering>();
  cov->kind = TreeCovering::Kind::Cube;
  cov->n = n;
  cov->base_cube = q;
  cov->m = m;
  cov->tau = tau;

  Rat cell = q.side / Rat(m);
  int64_t count = 1;
  for (int k = 0; k < n; ++k) count *= m;
  cov->parent.assign(count, -1);
  cov->U.resize(count);
  cov->V.resize(count);
  cov->B.resize(count);

  auto cell_of = [&](int64_t id) {
    std::array<int64_t, kMaxDim> idx{};
    for (int k = 0; k < n; ++k) {
      idx[k] = id % m;
      id /= m;
    }
    return idx;
  };
  auto id_of = [&](const std::array<int64_t, kMaxDim>& idx) {
    int64_t id = 0;
    for (int k = n - 1; k >= 0; --k) id = id * m + idx[k];
    return id;
  };
  auto cell_box = [&](const std::array<int64_t, kMaxDim>& idx) {
    PointR lo = PointR::make(n), hi = PointR::make(n);
    for (int k = 0; k < n; ++k) {
      lo.x[k] = q.corner.x[k] + Rat(idx[k]) * cell;
      hi.x[k] = lo.x[k] + cell;
    }
    return BoxR::make(lo, hi);
  };

  cov->root = 0;  // lexicographically smallest corner cube
  for (int64_t id = 0; id < count; ++id) {
    auto idx = cell_of(id);
    cov->V[id] = cell_box(idx);
    if (id == 0) {
      cov->parent[id] = -1;
      cov->U[id] = cov->V[id];
      continue;
    }
    // minimal face-adjacent chain toward the root, moving along axis 1
    // first, then axis 2, ...
    int ax = 0;
    while (idx[ax] == 0) ++ax;
    auto pidx = idx;
    pidx[ax] -= 1;
    cov->parent[id] = static_cast<int32_t>(id_of(pidx));
    BoxR a = cov->V[id], p = cell_box(pidx);
    PointR lo = PointR::make(n), hi = PointR::make(n);
    for (int k = 0; k < n; ++k) {
      lo.x[k] = min(a.lo.x[k], p.lo.x[k]);
      hi.x[k] = max(a.hi.x[k], p.hi.x[k]);
    }
    cov->U[id] = BoxR::make(lo, hi);

    // B_t: central member of the 3^n refinement of the parent cell against
    // the shared face (the one touching no other face of the parent).
    Rat third = cell / Rat(3);
    PointR blo = PointR::make(n);
    for (int k = 0; k < n; ++k) {
      int pos = (k == ax) ? 2 : 1;  // child sits on the parent's high side of ax
      blo.x[k] = p.lo.x[k] + Rat(pos) * third;
    }
    PointR bhi = PointR::make(n);
    for (int k = 0; k < n; ++k) bhi.x[k] = blo.x[k] + third;
    cov->B[id] = BoxR::make(blo, bhi);
  }
  cov->overlap_N = 2 * n;
  finalize_tree(*cov);
  return cov;
}

CoveringPtr john_tree_covering(WhitneyPtr dec, std::optional<PointR> root_hint) {
  if (!dec) throw std::invalid_argument("john_tree_covering: null decomposition");
  const auto& d = *dec;
  const int n = d.domain->dim();
  const int m = static_cast<int>(d.size());
  if (m == 0) throw std::invalid_argument("john_tree_covering: empty decomposition");

  // Face adjacency: the intersection of two touching cubes is a full
  // (n-1)-face of the smaller one.
  std::vector<std::vector<int32_t>> face_adj(m);
  for (int i = 0; i < m; ++i) {
    BoxR bi = d.cubes[i].box();
    for (int32_t j : d.neighbors[i]) {
      if (j < i) continue;
      BoxR bj = d.cubes[j].box();
      int abut = -1;
      bool face = true;
      Rat small_side = min(d.cubes[i].side, d.cubes[j].side);
      for (int k = 0; k < n && face; ++k) {
        bool touch = bi.hi.x[k] == bj.lo.x[k] || bj.hi.x[k] == bi.lo.x[k];
        Rat ov = min(bi.hi.x[k], bj.hi.x[k]) - max(bi.lo.x[k], bj.lo.x[k]);
        if (touch && ov.is_zero()) {
          if (abut >= 0) {
            face = false;  // touching along an edge or corner only
          } else {
            abut = k;
          }
        } else if (ov != small_side) {
          face = false;  // overlap must be the smaller cube's full extent
        }
      }
      if (face && abut >= 0) {
        face_adj[i].push_back(j);
        face_adj[j].push_back(i);
      }
    }
  }

  // Root: cube containing the hint, else a largest cube (ties: smallest id,
  // i.e. lexicographically smallest corner).
  int root = -1;
  if (root_hint) {
    for (int i = 0; i < m; ++i)
      if (d.cubes[i].box().contains_closed(*root_hint)) {
        root = i;
        break;
      }
    if (root < 0) throw std::invalid_argument("john_tree_covering: root hint outside every cube");
  } else {
    root = 0;
    for (int i = 1; i < m; ++i)
      if (d.cubes[i].side > d.cubes[root].side) root = i;
  }

  // Level-synchronized BFS; among the shortest-path parents pick the larger
  // cube first, then the lexicographically smaller corner.
  std::vector<int32_t> parent(m, -2), depth(m, -1);
  parent[root] = -1;
  depth[root] = 0;
  std::vector<int32_t> frontier = {root};
  int reached = 1;
  while (!frontier.empty()) {
    std::vector<int32_t> next;
    for (int32_t t : frontier)
      for (int32_t u : face_adj[t])
        if (depth[u] < 0) {
          next.push_back(u);
          depth[u] = depth[t] + 1;
        }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    for (int32_t u : next) {
      int best = -1;
      for (int32_t c : face_adj[u]) {
        if (depth[c] != depth[u] - 1) continue;
        if (best < 0) {
          best = c;
          continue;
        }
        if (d.cubes[c].side > d.cubes[best].side)
          best = c;
        else if (d.cubes[c].side == d.cubes[best].side && c < best)
          best = c;
      }
      parent[u] = best;
      ++reached;
    }
    frontier = std::move(next);
  }
  if (reached != m) {
    // report components
    std::vector<int> comp(m, -1);
    int nc = 0;
    for (int i = 0; i < m; ++i) {
      if (comp[i] >= 0) continue;
      std::vector<int> stack = {i};
      comp[i] = nc;
      while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        for (int32_t u : face_adj[t])
          if (comp[u] < 0) {
            comp[u] = nc;
            stack.push_back(u);
          }
      }
      ++nc;
    }
    throw std::runtime_error("john_tree_covering: face-adjacency graph is disconnected (" +
                             std::to_string(nc) + " components)");
  }

  auto cov = std::make_shared<TreeCovering>();
  cov->kind = TreeCovering::Kind::John;
  cov->n = n;
  cov->dec = dec;
  cov->root = root;
  cov->parent = std::move(parent);
  cov->U.resize(m);
  cov->V.resize(m);
  cov->B.resize(m);
  auto expanded = expand_cubes(d);
  for (int i = 0; i < m; ++i) {
    cov->U[i] = expanded[i].box();
    cov->V[i] = d.cubes[i].box();
  }
  for (int t = 0; t < m; ++t) {
    if (t == root) continue;
    int p = cov->parent[t];
    auto inter = cov->V[t].intersection(cov->V[p]);
    if (!inter) throw std::logic_error("john_tree_covering: parent does not touch child");
    PointR c = inter->center();
    Rat half = d.cubes[t].side / Rat(128);  // side l_t/64 about the face center
    PointR lo = PointR::make(n), hi = PointR::make(n);
    for (int k = 0; k < n; ++k) {
      lo.x[k] = c.x[k] - half;
      hi.x[k] = c.x[k] + half;
    }
    cov->B[t] = BoxR::make(lo, hi);
  }
  int64_t N = 1;
  for (int k = 0; k < n; ++k) N *= 12;
  cov->overlap_N = N;
  finalize_tree(*cov);
  return cov;
}

Shadow shadow(const TreeCovering& cov, int t) {
  if (t < 0 || t >= static_cast<int>(cov.size())) throw std::invalid_argument("shadow: unknown node");
  Shadow s;
  s.node = t;
  s.boxes = cov.shadow_boxes(t);
  s.volume = union_volume(s.boxes);
  return s;
}

std::vector<Rat> shadow_volumes(const TreeCovering& cov) {
  std::vector<Rat> out(cov.size());
  for (size_t t = 0; t < cov.size(); ++t) out[t] = union_volume(cov.shadow_boxes(static_cast<int>(t)));
  return out;
}

BomanResult boman_constant(const TreeCovering& cov) {
  if (cov.kind != TreeCovering::Kind::John)
    throw std::invalid_argument("boman_constant: john covering required");
  const auto& d = *cov.dec;
  BomanResult res;
  res.K = Rat(1);
  for (size_t t = 0; t < cov.size(); ++t) {
    PointR c = d.cubes[t].center();
    const Rat half = d.cubes[t].side / Rat(2);
    Rat dev(0);
    for (int32_t i = cov.dfs_pos[t]; i < cov.subtree_end[t]; ++i) {
      const BoxR& u = cov.U[cov.dfs_order[i]];
      for (int k = 0; k < cov.n; ++k) {
        dev = max(dev, u.hi.x[k] - c.x[k]);
        dev = max(dev, c.x[k] - u.lo.x[k]);
      }
    }
    Rat k_t = dev / half;
    if (res.K < k_t) {
      res.K = k_t;
      res.argmax = static_cast<int>(t);
    }
  }
  res.K_d = res.K.to_double();
  return res;
}

CoveringReport verify_tree_covering(const TreeCovering& cov) {
  CoveringReport rep;
  const int m = static_cast<int>(cov.size());

  // Tree well-formedness: unique root, every node reaches it.
  rep.tree_ok = true;
  int roots = 0;
  for (int t = 0; t < m; ++t)
    if (cov.parent[t] < 0) ++roots;
  if (roots != 1 || cov.parent[cov.root] != -1) {
    rep.tree_ok = false;
    rep.failures.push_back("tree: root is not unique");
  }
  for (int t = 0; t < m && rep.tree_ok; ++t) {
    int cur = t, steps = 0;
    while (cur != cov.root && steps <= m) {
      cur = cov.parent[cur];
      if (cur < 0) break;
      ++steps;
    }
    if (cur != cov.root) {
      rep.tree_ok = false;
      rep.failures.push_back("tree: node " + std::to_string(t) + " does not reach the root");
    }
  }

  // Overlap: V_t inside U_t gives the lower bound on the covered region;
  // the upper bound is the exact max stabbing count of the U arrangement.
  rep.overlap_ok = true;
  for (int t = 0; t < m; ++t)
    if (!cov.U[t].contains_box(cov.V[t])) {
      rep.overlap_ok = false;
      rep.failures.push_back("overlap: V_" + std::to_string(t) + " not inside U_" + std::to_string(t));
    }
  rep.measured_overlap = max_overlap(cov.U);
  if (rep.measured_overlap > cov.overlap_N) {
    rep.overlap_ok = false;
    rep.failures.push_back("overlap: measured " + std::to_string(rep.measured_overlap) +
                           " exceeds N=" + std::to_string(cov.overlap_N));
  }

  // Transfer cubes.
  rep.transfer_ok = true;
  std::vector<BoxR> bs;
  std::vector<int> bid;
  for (int t = 0; t < m; ++t) {
    if (t == cov.root) continue;
    bs.push_back(cov.B[t]);
    bid.push_back(t);
    int p = cov.parent[t];
    if (!(cov.U[t].contains_box(cov.B[t]) && cov.U[p].contains_box(cov.B[t]))) {
      rep.transfer_ok = false;
      rep.failures.push_back("transfer: B_" + std::to_string(t) + " not inside U_t and U_parent");
    }
  }
  if (auto w = interiors_intersect_witness(bs)) {
    rep.transfer_ok = false;
    rep.failures.push_back("transfer: B_" + std::to_string(bid[w->first]) + " and B_" +
                           std::to_string(bid[w->second]) + " overlap");
  }

  // Base pieces partition the covered region.
  rep.partition_ok = true;
  if (auto w = interiors_intersect_witness(cov.V)) {
    rep.partition_ok = false;
    rep.failures.push_back("partition: V_" + std::to_string(w->first) + " and V_" +
                           std::to_string(w->second) + " overlap");
  }

  // Eccentricity |W_t|/|B_t| against the kind-specific bound, exact.
  rep.eccentricity_ok = true;
  Rat bound(0);
  if (cov.kind == TreeCovering::Kind::Cube) {
    bound = Rat(1);
    for (int k = 0; k < cov.n; ++k) bound *= Rat(3 * std::max(cov.m, 1));
  } else {
    Rat K = boman_constant(cov).K;
    rep.K = K.to_double();
    bound = Rat(1);
    for (int k = 0; k < cov.n; ++k) bound *= Rat(72) * K;
  }
  double worst = 0;
  for (int t = 0; t < m; ++t) {
    if (t == cov.root) continue;
    Rat w = union_volume(cov.shadow_boxes(t));
    Rat bvol = cov.B[t].volume();
    if (w > bound * bvol) {
      rep.eccentricity_ok = false;
      rep.failures.push_back("eccentricity bound fails at node " + std::to_string(t));
    }
    worst = std::max(worst, w.to_double() / bvol.to_double());
  }
  rep.max_eccentricity = worst;
  return rep;
}

WeightComparabilityReport weight_comparability(const TreeCovering& cov, const BoundarySet& F,
                                               double K) {
  WeightComparabilityReport rep;
  const int n = cov.n;
  rep.bound = 3.0 * K * std::sqrt(static_cast<double>(n));
  rep.pass = true;

  // Certified sup of d_F over a box: refine while the Lipschitz slack
  // matters; certified inf over B_t the same way.
  auto sup_over = [&](const BoxR& box) {
    double best = 0;
    struct Item {
      BoxR b;
      int depth;
    };
    std::vector<Item> stack = {{box, 0}};
    while (!stack.empty()) {
      auto [b, depth] = stack.back();
      stack.pop_back();
      double mid = F.distance(b.center());
      double slack = std::sqrt(b.sq_half_diam().to_double());
      if (depth >= 3 || slack <= 0.02 * (mid + slack)) {
        best = std::max(best, mid + slack);
        continue;
      }
      // split along the longest axis
      int ax = 0;
      for (int k = 1; k < n; ++k)
        if (b.side(k) > b.side(ax)) ax = k;
      Rat cut = (b.lo.x[ax] + b.hi.x[ax]) / Rat(2);
      BoxR a = b, c = b;
      a.hi.x[ax] = cut;
      c.lo.x[ax] = cut;
      stack.push_back({a, depth + 1});
      stack.push_back({c, depth + 1});
    }
    return best;
  };
  auto inf_over = [&](const BoxR& box) {
    double mid = F.distance(box.center());
    double slack = std::sqrt(box.sq_half_diam().to_double());
    return std::max(0.0, mid - slack);
  };

  for (size_t t = 0; t < cov.size(); ++t) {
    if (static_cast<int>(t) == cov.root) continue;
    double sup = 0;
    for (int32_t i = cov.dfs_pos[t]; i < cov.subtree_end[t]; ++i)
      sup = std::max(sup, sup_over(cov.U[cov.dfs_order[i]]));
    double inf = inf_over(cov.B[t]);
    double ratio = inf > 0 ? sup / inf : std::numeric_limits<double>::infinity();
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_node = static_cast<int>(t);
    }
  }
  rep.pass = rep.worst_ratio <= rep.bound;
  return rep;
}

}  // namespace fracpoin
