#include "fracpoin/box_ops.hpp"

#include <algorithm>
#include <numeric>

namespace fracpoin {

namespace {

// Recursive coordinate compression. At each axis the candidate boxes span
// whole slabs (their coordinates are among the cut points), so a box either
// covers a slab or misses it.
struct Compress {
  int n;

  Rat volume(const std::vector<const BoxR*>& boxes, int axis) {
    if (boxes.empty()) return Rat(0);
    if (axis == n - 1) {
      // length of the interval union
      std::vector<std::pair<Rat, Rat>> iv;
      iv.reserve(boxes.size());
      for (auto* b : boxes) iv.emplace_back(b->lo.x[axis], b->hi.x[axis]);
      std::sort(iv.begin(), iv.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      Rat total(0);
      Rat curlo = iv[0].first, curhi = iv[0].second;
      for (size_t i = 1; i < iv.size(); ++i) {
        if (iv[i].first <= curhi) {
          curhi = max(curhi, iv[i].second);
        } else {
          total += curhi - curlo;
          curlo = iv[i].first;
          curhi = iv[i].second;
        }
      }
      total += curhi - curlo;
      return total;
    }
    std::vector<Rat> cuts;
    cuts.reserve(boxes.size() * 2);
    for (auto* b : boxes) {
      cuts.push_back(b->lo.x[axis]);
      cuts.push_back(b->hi.x[axis]);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Rat total(0);
    std::vector<const BoxR*> sub;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      sub.clear();
      for (auto* b : boxes)
        if (b->lo.x[axis] <= cuts[i] && cuts[i + 1] <= b->hi.x[axis]) sub.push_back(b);
      if (!sub.empty()) total += (cuts[i + 1] - cuts[i]) * volume(sub, axis + 1);
    }
    return total;
  }

  int overlap(const std::vector<const BoxR*>& boxes, int axis) {
    if (boxes.empty()) return 0;
    if (axis == n - 1) {
      // max stabbing count of intervals via events
      std::vector<std::pair<Rat, int>> ev;
      ev.reserve(boxes.size() * 2);
      for (auto* b : boxes) {
        ev.emplace_back(b->lo.x[axis], +1);
        ev.emplace_back(b->hi.x[axis], -1);
      }
      // interiors only: closes at a coordinate processed before opens
      std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
      });
      int cur = 0, best = 0;
      for (auto& e : ev) {
        cur += e.second;
        best = std::max(best, cur);
      }
      return best;
    }
    std::vector<Rat> cuts;
    for (auto* b : boxes) {
      cuts.push_back(b->lo.x[axis]);
      cuts.push_back(b->hi.x[axis]);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    int best = 0;
    std::vector<const BoxR*> sub;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      sub.clear();
      for (auto* b : boxes)
        if (b->lo.x[axis] <= cuts[i] && cuts[i + 1] <= b->hi.x[axis]) sub.push_back(b);
      if (static_cast<int>(sub.size()) > best) best = std::max(best, overlap(sub, axis + 1));
    }
    return best;
  }
};

}  // namespace

Rat union_volume(const std::vector<BoxR>& boxes) {
  if (boxes.empty()) return Rat(0);
  std::vector<const BoxR*> ptrs;
  ptrs.reserve(boxes.size());
  for (const auto& b : boxes) ptrs.push_back(&b);
  Compress c{boxes[0].n};
  return c.volume(ptrs, 0);
}

std::optional<std::pair<int, int>> interiors_intersect_witness(const std::vector<BoxR>& boxes) {
  const int m = static_cast<int>(boxes.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return boxes[a].lo.x[0] < boxes[b].lo.x[0]; });
  std::vector<int> active;
  for (int oi = 0; oi < m; ++oi) {
    int i = order[oi];
    const Rat& lo0 = boxes[i].lo.x[0];
    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](int j) { return boxes[j].hi.x[0] <= lo0; }),
                 active.end());
    for (int j : active)
      if (boxes[i].intersects_open(boxes[j])) return std::make_pair(std::min(i, j), std::max(i, j));
    active.push_back(i);
  }
  return std::nullopt;
}

std::vector<std::pair<int, int>> touching_pairs(const std::vector<BoxR>& boxes) {
  const int m = static_cast<int>(boxes.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return boxes[a].lo.x[0] < boxes[b].lo.x[0]; });
  std::vector<std::pair<int, int>> out;
  std::vector<int> active;
  for (int oi = 0; oi < m; ++oi) {
    int i = order[oi];
    const Rat& lo0 = boxes[i].lo.x[0];
    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](int j) { return boxes[j].hi.x[0] < lo0; }),
                 active.end());
    for (int j : active)
      if (boxes[i].intersects_closed(boxes[j]))
        out.emplace_back(std::min(i, j), std::max(i, j));
    active.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int max_overlap(const std::vector<BoxR>& boxes) {
  if (boxes.empty()) return 0;
  std::vector<const BoxR*> ptrs;
  ptrs.reserve(boxes.size());
  for (const auto& b : boxes) ptrs.push_back(&b);
  Compress c{boxes[0].n};
  return c.overlap(ptrs, 0);
}

}  // namespace fracpoin
