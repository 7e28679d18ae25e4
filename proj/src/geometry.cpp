#include "fracpoin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace fracpoin {

BoxR BoxR::make(const PointR& lo, const PointR& hi) {
  if (lo.n != hi.n) throw std::invalid_argument("BoxR: dimension mismatch");
  BoxR b;
  b.lo = lo;
  b.hi = hi;
  b.n = lo.n;
  for (int k = 0; k < b.n; ++k)
    if (hi.x[k] < lo.x[k]) throw std::invalid_argument("BoxR: hi < lo");
  return b;
}

Rat BoxR::volume() const {
  Rat v(1);
  for (int k = 0; k < n; ++k) v *= side(k);
  return v;
}

Rat BoxR::sq_half_diam() const {
  Rat v(0);
  for (int k = 0; k < n; ++k) {
    Rat h = side(k) / Rat(2);
    v += h * h;
  }
  return v;
}

PointR BoxR::center() const {
  PointR c = PointR::make(n);
  for (int k = 0; k < n; ++k) c.x[k] = (lo.x[k] + hi.x[k]) / Rat(2);
  return c;
}

bool BoxR::degenerate() const {
  for (int k = 0; k < n; ++k)
    if (lo.x[k] == hi.x[k]) return true;
  return false;
}

bool BoxR::contains_closed(const PointR& p) const {
  for (int k = 0; k < n; ++k)
    if (p.x[k] < lo.x[k] || hi.x[k] < p.x[k]) return false;
  return true;
}

bool BoxR::contains_open(const PointR& p) const {
  for (int k = 0; k < n; ++k)
    if (p.x[k] <= lo.x[k] || hi.x[k] <= p.x[k]) return false;
  return true;
}

bool BoxR::contains_box(const BoxR& other) const {
  for (int k = 0; k < n; ++k)
    if (other.lo.x[k] < lo.x[k] || hi.x[k] < other.hi.x[k]) return false;
  return true;
}

bool BoxR::intersects_closed(const BoxR& other) const {
  for (int k = 0; k < n; ++k)
    if (other.hi.x[k] < lo.x[k] || hi.x[k] < other.lo.x[k]) return false;
  return true;
}

bool BoxR::intersects_open(const BoxR& other) const {
  for (int k = 0; k < n; ++k)
    if (!(lo.x[k] < other.hi.x[k] && other.lo.x[k] < hi.x[k])) return false;
  return true;
}

std::optional<BoxR> BoxR::intersection(const BoxR& other) const {
  PointR l = PointR::make(n), h = PointR::make(n);
  for (int k = 0; k < n; ++k) {
    l.x[k] = max(lo.x[k], other.lo.x[k]);
    h.x[k] = min(hi.x[k], other.hi.x[k]);
    if (h.x[k] < l.x[k]) return std::nullopt;
  }
  return BoxR::make(l, h);
}

BoxR BoxR::scaled_about_center(const Rat& factor) const {
  PointR c = center();
  PointR l = PointR::make(n), h = PointR::make(n);
  for (int k = 0; k < n; ++k) {
    Rat half = side(k) / Rat(2) * factor;
    l.x[k] = c.x[k] - half;
    h.x[k] = c.x[k] + half;
  }
  return BoxR::make(l, h);
}

Cube Cube::make(const PointR& corner, const Rat& side) {
  if (side <= Rat(0)) throw std::invalid_argument("Cube: side must be positive");
  Cube c;
  c.corner = corner;
  c.side = side;
  c.n = corner.n;
  return c;
}

BoxR Cube::box() const {
  PointR h = PointR::make(n);
  for (int k = 0; k < n; ++k) h.x[k] = corner.x[k] + side;
  return BoxR::make(corner, h);
}

PointR Cube::center() const {
  PointR c = PointR::make(n);
  for (int k = 0; k < n; ++k) c.x[k] = corner.x[k] + side / Rat(2);
  return c;
}

Cube Cube::dilated(const Rat& k) const {
  PointR c = center();
  Rat ns = side * k;
  PointR nc = PointR::make(n);
  for (int i = 0; i < n; ++i) nc.x[i] = c.x[i] - ns / Rat(2);
  return Cube::make(nc, ns);
}

Rat sq_dist_point_box(const PointR& p, const BoxR& b) {
  Rat d2(0);
  for (int k = 0; k < p.n; ++k) {
    Rat g(0);
    if (p.x[k] < b.lo.x[k])
      g = b.lo.x[k] - p.x[k];
    else if (b.hi.x[k] < p.x[k])
      g = p.x[k] - b.hi.x[k];
    d2 += g * g;
  }
  return d2;
}

Rat sq_dist_box_box(const BoxR& a, const BoxR& b) {
  Rat d2(0);
  for (int k = 0; k < a.n; ++k) {
    Rat g(0);
    if (a.hi.x[k] < b.lo.x[k])
      g = b.lo.x[k] - a.hi.x[k];
    else if (b.hi.x[k] < a.lo.x[k])
      g = a.lo.x[k] - b.hi.x[k];
    d2 += g * g;
  }
  return d2;
}

namespace {

double sq_dist_point_box_d(const std::array<double, kMaxDim>& p,
                           const std::array<double, 2 * kMaxDim>& b, int n) {
  double d2 = 0;
  for (int k = 0; k < n; ++k) {
    double g = 0;
    if (p[k] < b[2 * k])
      g = b[2 * k] - p[k];
    else if (p[k] > b[2 * k + 1])
      g = p[k] - b[2 * k + 1];
    d2 += g * g;
  }
  return d2;
}

std::array<double, 2 * kMaxDim> box_to_d(const BoxR& b) {
  std::array<double, 2 * kMaxDim> out{};
  for (int k = 0; k < b.n; ++k) {
    out[2 * k] = b.lo.x[k].to_double();
    out[2 * k + 1] = b.hi.x[k].to_double();
  }
  return out;
}

}  // namespace

RectilinearDomain::RectilinearDomain(int n, Rat cell_size, std::vector<CellIndex> cells,
                                     std::vector<LatticeFace> slits)
    : n_(n), cell_size_(std::move(cell_size)), cells_(std::move(cells)), slits_(std::move(slits)) {
  if (n_ < 2 || n_ > kMaxDim) throw std::invalid_argument("domain: dimension out of range");
  if (cells_.empty()) throw std::invalid_argument("domain: empty cell set");
  if (cell_size_ <= Rat(0)) throw std::invalid_argument("domain: cell_size must be positive");
  for (auto& c : cells_)
    for (int k = n_; k < kMaxDim; ++k) c[k] = 0;
  std::sort(cells_.begin(), cells_.end());
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());

  for (const auto& sl : slits_) {
    if (sl.axis < 0 || sl.axis >= n_) throw std::invalid_argument("domain: bad slit axis");
    CellIndex other = sl.cell;
    other[sl.axis] += 1;
    if (!has_cell(sl.cell) || !has_cell(other))
      throw std::invalid_argument("domain: slit is not an interior lattice face");
  }

  // Edge connectivity under shared-(n-1)-face adjacency; slit faces block
  // the adjacency they sit on.
  std::vector<char> seen(cells_.size(), 0);
  std::vector<size_t> stack = {0};
  seen[0] = 1;
  size_t reached = 1;
  while (!stack.empty()) {
    size_t i = stack.back();
    stack.pop_back();
    for (int k = 0; k < n_; ++k) {
      for (int dir = -1; dir <= 1; dir += 2) {
        CellIndex nb = cells_[i];
        nb[k] += dir;
        auto it = std::lower_bound(cells_.begin(), cells_.end(), nb);
        if (it == cells_.end() || *it != nb) continue;
        const CellIndex& low = dir > 0 ? cells_[i] : nb;
        if (slit_between(low, k)) continue;
        size_t j = static_cast<size_t>(it - cells_.begin());
        if (!seen[j]) {
          seen[j] = 1;
          ++reached;
          stack.push_back(j);
        }
      }
    }
  }
  if (reached != cells_.size()) throw std::invalid_argument("domain: cell set is disconnected");

  build_boundary();
}

bool RectilinearDomain::slit_between(const CellIndex& low, int axis) const {
  for (const auto& sl : slits_)
    if (sl.axis == axis && sl.cell == low) return true;
  return false;
}

bool RectilinearDomain::has_cell(const CellIndex& c) const {
  return std::binary_search(cells_.begin(), cells_.end(), c);
}

Rat RectilinearDomain::volume() const {
  return pow_int(cell_size_, n_) * Rat(static_cast<long long>(cells_.size()));
}

BoxR RectilinearDomain::cell_box(const CellIndex& c) const {
  PointR lo = PointR::make(n_), hi = PointR::make(n_);
  for (int k = 0; k < n_; ++k) {
    lo.x[k] = Rat(c[k]) * cell_size_;
    hi.x[k] = Rat(c[k] + 1) * cell_size_;
  }
  return BoxR::make(lo, hi);
}

BoxR RectilinearDomain::bounding_box() const {
  CellIndex lo = cells_.front(), hi = cells_.front();
  for (const auto& c : cells_)
    for (int k = 0; k < n_; ++k) {
      lo[k] = std::min(lo[k], c[k]);
      hi[k] = std::max(hi[k], c[k]);
    }
  PointR l = PointR::make(n_), h = PointR::make(n_);
  for (int k = 0; k < n_; ++k) {
    l.x[k] = Rat(lo[k]) * cell_size_;
    h.x[k] = Rat(hi[k] + 1) * cell_size_;
  }
  return BoxR::make(l, h);
}

void RectilinearDomain::build_boundary() {
  boundary_.clear();
  slit_face_count_ = 0;
  auto face_box = [&](const CellIndex& c, int axis, bool high) {
    PointR lo = PointR::make(n_), hi = PointR::make(n_);
    for (int k = 0; k < n_; ++k) {
      if (k == axis) {
        Rat plane = Rat(c[k] + (high ? 1 : 0)) * cell_size_;
        lo.x[k] = plane;
        hi.x[k] = plane;
      } else {
        lo.x[k] = Rat(c[k]) * cell_size_;
        hi.x[k] = Rat(c[k] + 1) * cell_size_;
      }
    }
    return BoxR::make(lo, hi);
  };
  for (const auto& c : cells_) {
    for (int k = 0; k < n_; ++k) {
      for (int dir = -1; dir <= 1; dir += 2) {
        CellIndex nb = c;
        nb[k] += dir;
        bool high = dir > 0;
        if (!has_cell(nb)) {
          boundary_.push_back(face_box(c, k, high));
        } else if (high && slit_between(c, k)) {
          boundary_.push_back(face_box(c, k, true));
          ++slit_face_count_;  // the same geometric face bounds both sides
        }
      }
    }
  }
  boundary_d_.clear();
  boundary_d_.reserve(boundary_.size());
  for (const auto& f : boundary_) boundary_d_.push_back(box_to_d(f));
}

bool RectilinearDomain::contains_closed(const PointR& p) const {
  // p may sit on lattice planes, in which case it belongs to up to 2^n cells.
  std::array<std::vector<int64_t>, kMaxDim> cand;
  for (int k = 0; k < n_; ++k) {
    Rat q = p.x[k] / cell_size_;
    // floor of q
    int64_t fl = q.num() >= 0 ? q.num() / q.den() : -((-q.num() + q.den() - 1) / q.den());
    cand[k].push_back(fl);
    if (Rat(fl) == q) cand[k].push_back(fl - 1);
  }
  std::vector<CellIndex> stack;
  CellIndex idx{};
  std::vector<int> pos(n_, 0);
  while (true) {
    for (int k = 0; k < n_; ++k) idx[k] = cand[k][pos[k]];
    for (int k = n_; k < kMaxDim; ++k) idx[k] = 0;
    if (has_cell(idx)) return true;
    int k = 0;
    while (k < n_) {
      if (++pos[k] < static_cast<int>(cand[k].size())) break;
      pos[k] = 0;
      ++k;
    }
    if (k == n_) break;
  }
  return false;
}

bool RectilinearDomain::contains_open(const PointR& p) const {
  return contains_closed(p) && boundary_sq_dist(p) > Rat(0);
}

bool RectilinearDomain::contains_closed_d(const std::array<double, kMaxDim>& p) const {
  double cs = cell_size_.to_double();
  CellIndex idx{};
  for (int k = 0; k < n_; ++k) idx[k] = static_cast<int64_t>(std::floor(p[k] / cs));
  return has_cell(idx);
}

Rat RectilinearDomain::boundary_sq_dist(const PointR& p) const {
  Rat best = sq_dist_point_box(p, boundary_[0]);
  for (size_t i = 1; i < boundary_.size(); ++i) {
    if (best.is_zero()) break;
    best = min(best, sq_dist_point_box(p, boundary_[i]));
  }
  return best;
}

Rat RectilinearDomain::boundary_sq_dist_box(const BoxR& b) const {
  Rat best = sq_dist_box_box(b, boundary_[0]);
  for (size_t i = 1; i < boundary_.size(); ++i) {
    if (best.is_zero()) break;
    best = min(best, sq_dist_box_box(b, boundary_[i]));
  }
  return best;
}

double RectilinearDomain::boundary_distance(const PointR& p) const {
  if (!contains_open(p)) throw std::invalid_argument("boundary_distance: point not in the open domain");
  return std::sqrt(boundary_sq_dist(p).to_double());
}

double RectilinearDomain::boundary_distance_unchecked(const PointR& p) const {
  return std::sqrt(boundary_sq_dist(p).to_double());
}

double RectilinearDomain::boundary_distance_d(const std::array<double, kMaxDim>& p) const {
  double best = sq_dist_point_box_d(p, boundary_d_[0], n_);
  for (size_t i = 1; i < boundary_d_.size(); ++i)
    best = std::min(best, sq_dist_point_box_d(p, boundary_d_[i], n_));
  return std::sqrt(best);
}

namespace {

// Checks that `seg` is covered by the union of those `faces` lying in the
// same affine span, by coordinate compression along the free axes.
bool covered_by_faces(const BoxR& seg, const std::vector<BoxR>& faces) {
  int n = seg.n;
  std::vector<const BoxR*> onplane;
  for (const auto& f : faces) {
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      if (seg.lo.x[k] == seg.hi.x[k]) {
        // degenerate axis of the segment: the face must contain that coord
        if (seg.lo.x[k] < f.lo.x[k] || f.hi.x[k] < seg.lo.x[k]) ok = false;
      }
    }
    if (ok) onplane.push_back(&f);
  }
  if (onplane.empty()) return false;

  std::vector<int> free_axes;
  for (int k = 0; k < n; ++k)
    if (seg.lo.x[k] < seg.hi.x[k]) free_axes.push_back(k);
  if (free_axes.empty()) return true;  // a point covered by some face

  // Recursive compression over the free axes.
  struct Rec {
    const std::vector<int>& axes;
    bool run(const BoxR& region, const std::vector<const BoxR*>& cands, size_t ai) {
      if (ai == axes.size()) return !cands.empty();
      int k = axes[ai];
      std::vector<Rat> cuts = {region.lo.x[k], region.hi.x[k]};
      for (auto* c : cands) {
        if (region.lo.x[k] < c->lo.x[k] && c->lo.x[k] < region.hi.x[k]) cuts.push_back(c->lo.x[k]);
        if (region.lo.x[k] < c->hi.x[k] && c->hi.x[k] < region.hi.x[k]) cuts.push_back(c->hi.x[k]);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        BoxR slab = region;
        slab.lo.x[k] = cuts[i];
        slab.hi.x[k] = cuts[i + 1];
        std::vector<const BoxR*> sub;
        for (auto* c : cands)
          if (c->lo.x[k] <= cuts[i] && cuts[i + 1] <= c->hi.x[k]) sub.push_back(c);
        if (!run(slab, sub, ai + 1)) return false;
      }
      return true;
    }
  } rec{free_axes};
  return rec.run(seg, onplane, 0);
}

}  // namespace

BoundarySet::BoundarySet(const RectilinearDomain& domain, std::vector<BoxR> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw std::invalid_argument("BoundarySet: empty segment list");
  for (const auto& s : segments_) {
    if (s.n != domain.dim()) throw std::invalid_argument("BoundarySet: dimension mismatch");
    if (!s.degenerate()) throw std::invalid_argument("BoundarySet: segment has full dimension");
    if (!covered_by_faces(s, domain.boundary_faces()))
      throw std::invalid_argument("BoundarySet: segment not contained in the boundary");
  }
  segments_d_.reserve(segments_.size());
  for (const auto& s : segments_) segments_d_.push_back(box_to_d(s));
}

Rat BoundarySet::sq_dist(const PointR& p) const {
  Rat best = sq_dist_point_box(p, segments_[0]);
  for (size_t i = 1; i < segments_.size(); ++i)
    best = min(best, sq_dist_point_box(p, segments_[i]));
  return best;
}

double BoundarySet::distance(const PointR& p) const { return std::sqrt(sq_dist(p).to_double()); }

double BoundarySet::distance_d(const std::array<double, kMaxDim>& p) const {
  double best = sq_dist_point_box_d(p, segments_d_[0], segments_[0].n);
  for (size_t i = 1; i < segments_d_.size(); ++i)
    best = std::min(best, sq_dist_point_box_d(p, segments_d_[i], segments_[i].n));
  return std::sqrt(best);
}

BoundarySet BoundarySet::corner(const RectilinearDomain& domain) {
  BoxR bb = domain.bounding_box();
  PointR c = bb.lo;
  BoundarySet f(domain, {BoxR::make(c, c)});
  f.name = "corner";
  return f;
}

BoundarySet BoundarySet::one_edge(const RectilinearDomain& domain) {
  // Lowest boundary face orthogonal to axis 0 (the "left edge").
  const BoxR* pick = nullptr;
  for (const auto& f : domain.boundary_faces()) {
    if (!(f.lo.x[0] == f.hi.x[0])) continue;
    if (pick == nullptr || f.lo.x[0] < pick->lo.x[0] ||
        (f.lo.x[0] == pick->lo.x[0] && f.lo.x[1] < pick->lo.x[1]))
      pick = &f;
  }
  BoundarySet f(domain, {*pick});
  f.name = "edge";
  return f;
}

BoundarySet BoundarySet::whole_boundary(const RectilinearDomain& domain) {
  BoundarySet f(domain, domain.boundary_faces());
  f.name = "boundary";
  return f;
}

DomainPtr build_domain(const DomainSpec& spec) {
  using F = DomainSpec::Family;
  switch (spec.family) {
    case F::Square: {
      auto d = std::make_shared<RectilinearDomain>(2, spec.square_side,
                                                   std::vector<CellIndex>{CellIndex{0, 0, 0, 0}});
      const_cast<RectilinearDomain&>(*d).name = "square";
      return d;
    }
    case F::LShape: {
      std::vector<CellIndex> cells = {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}};
      auto d = std::make_shared<RectilinearDomain>(2, Rat(1), cells);
      const_cast<RectilinearDomain&>(*d).name = "l_shape";
      return d;
    }
    case F::SlitSquare: {
      // Unit square cut by the slit {1/2} x [0, 1/2].
      std::vector<CellIndex> cells = {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}};
      std::vector<LatticeFace> slits = {{0, CellIndex{0, 0, 0, 0}}};
      auto d = std::make_shared<RectilinearDomain>(2, Rat(1, 2), cells, slits);
      const_cast<RectilinearDomain&>(*d).name = "slit_square";
      return d;
    }
    case F::RoomsAndCorridors: {
      if (spec.rooms_k < 1) throw std::invalid_argument("rooms_and_corridors: k >= 1 required");
      if (static_cast<int>(spec.corridor_widths.size()) != spec.rooms_k - 1)
        throw std::invalid_argument("rooms_and_corridors: need k-1 corridor widths");
      Rat corridor_len(1, 2);
      Rat cs = min(Rat(1, 2), corridor_len);
      for (const auto& w : spec.corridor_widths) {
        if (w <= Rat(0) || w > Rat(1))
          throw std::invalid_argument("rooms_and_corridors: widths must be in (0,1]");
        cs = min(cs, w);
      }
      // cs must divide 1, 1/2 and every width; widths are dyadic in practice.
      auto divides = [&](const Rat& len) { return (len / cs).is_integer(); };
      for (const auto& w : spec.corridor_widths)
        if (!divides(w)) throw std::invalid_argument("rooms_and_corridors: widths must share a lattice");
      if (!divides(Rat(1)) || !divides(corridor_len))
        throw std::invalid_argument("rooms_and_corridors: widths must share a lattice");

      std::vector<CellIndex> cells;
      int64_t per_unit = (Rat(1) / cs).num();
      int64_t per_corr = (corridor_len / cs).num();
      int64_t x0 = 0;
      for (int room = 0; room < spec.rooms_k; ++room) {
        for (int64_t i = 0; i < per_unit; ++i)
          for (int64_t j = 0; j < per_unit; ++j) cells.push_back({x0 + i, j, 0, 0});
        x0 += per_unit;
        if (room + 1 < spec.rooms_k) {
          int64_t wcells = (spec.corridor_widths[room] / cs).num();
          for (int64_t i = 0; i < per_corr; ++i)
            for (int64_t j = 0; j < wcells; ++j) cells.push_back({x0 + i, j, 0, 0});
          x0 += per_corr;
        }
      }
      auto d = std::make_shared<RectilinearDomain>(2, cs, cells);
      const_cast<RectilinearDomain&>(*d).name = "rooms_and_corridors";
      return d;
    }
    case F::Explicit: {
      auto d = std::make_shared<RectilinearDomain>(spec.n, spec.cell_size, spec.cells, spec.slits);
      const_cast<RectilinearDomain&>(*d).name = "explicit";
      return d;
    }
  }
  throw std::invalid_argument("build_domain: unknown family");
}

DomainPtr build_domain_named(const std::string& family) {
  DomainSpec spec;
  if (family == "square") {
    spec.family = DomainSpec::Family::Square;
  } else if (family == "l_shape") {
    spec.family = DomainSpec::Family::LShape;
  } else if (family == "slit_square") {
    spec.family = DomainSpec::Family::SlitSquare;
  } else if (family == "rooms_and_corridors") {
    spec.family = DomainSpec::Family::RoomsAndCorridors;
    spec.rooms_k = 2;
    spec.corridor_widths = {Rat(1, 4)};
  } else {
    throw std::invalid_argument("unknown domain family: " + family);
  }
  return build_domain(spec);
}

}  // namespace fracpoin
