#include "fracpoin/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracpoin {

std::shared_ptr<const Grid> Grid::make(DomainPtr domain, int div) {
  if (!domain) throw std::invalid_argument("Grid: null domain");
  if (div < 1) throw std::invalid_argument("Grid: subdivision must be >= 1");
  auto g = std::make_shared<Grid>();
  g->dom_ = std::move(domain);
  g->div_ = div;
  g->n_ = g->dom_->dim();
  g->h_ = g->dom_->cell_size() / Rat(div);
  g->h_d_ = g->h_.to_double();
  g->w_exact_ = pow_int(g->h_, g->n_);
  g->w_ = g->w_exact_.to_double();

  const auto& cells = g->dom_->cells();
  g->gcoord_.reserve(cells.size() * static_cast<size_t>(std::pow(div, g->n_)));
  std::array<int64_t, kMaxDim> sub{};
  for (const auto& c : cells) {
    std::fill(sub.begin(), sub.end(), 0);
    while (true) {
      std::array<int64_t, kMaxDim> gc{};
      for (int k = 0; k < g->n_; ++k) gc[k] = c[k] * div + sub[k];
      g->gcoord_.push_back(gc);
      int k = 0;
      while (k < g->n_) {
        if (++sub[k] < div) break;
        sub[k] = 0;
        ++k;
      }
      if (k == g->n_) break;
    }
  }
  std::sort(g->gcoord_.begin(), g->gcoord_.end());

  for (int k = 0; k < g->n_; ++k) g->mid_[k].resize(g->gcoord_.size());
  g->dist_b_.resize(g->gcoord_.size());
  for (size_t i = 0; i < g->gcoord_.size(); ++i) {
    PointR p = g->midpoint_exact(i);
    for (int k = 0; k < g->n_; ++k) g->mid_[k][i] = p.x[k].to_double();
    g->dist_b_[i] = std::sqrt(g->dom_->boundary_sq_dist(p).to_double());
  }
  return g;
}

PointR Grid::midpoint_exact(size_t i) const {
  PointR p = PointR::make(n_);
  for (int k = 0; k < n_; ++k)
    p.x[k] = (Rat(2 * gcoord_[i][k] + 1)) * h_ / Rat(2);
  return p;
}

BoxR Grid::cell_box(size_t i) const {
  PointR lo = PointR::make(n_), hi = PointR::make(n_);
  for (int k = 0; k < n_; ++k) {
    lo.x[k] = Rat(gcoord_[i][k]) * h_;
    hi.x[k] = Rat(gcoord_[i][k] + 1) * h_;
  }
  return BoxR::make(lo, hi);
}

int64_t Grid::lookup(const std::array<int64_t, kMaxDim>& g) const {
  auto it = std::lower_bound(gcoord_.begin(), gcoord_.end(), g);
  if (it == gcoord_.end() || *it != g) return -1;
  return it - gcoord_.begin();
}

std::vector<double> distances_to(const Grid& grid, const BoundarySet& F) {
  std::vector<double> out(grid.size());
  for (size_t i = 0; i < grid.size(); ++i)
    out[i] = std::sqrt(F.sq_dist(grid.midpoint_exact(i)).to_double());
  return out;
}

Field make_constant(GridPtr grid, double c) {
  Field f;
  f.grid = std::move(grid);
  f.v.assign(f.grid->size(), c);
  f.id = "const";
  return f;
}

Field make_coordinate(GridPtr grid, int axis) {
  Field f;
  f.grid = std::move(grid);
  f.v = f.grid->mid(axis);
  f.id = "coord:" + std::to_string(axis);
  return f;
}

Field make_band_limited(GridPtr grid, uint64_t seed, int modes, double max_freq) {
  Field f;
  f.grid = std::move(grid);
  f.v.assign(f.grid->size(), 0.0);
  f.id = "random:" + std::to_string(seed);
  Rng rng(seed);
  const int n = f.grid->dim();
  BoxR bb = f.grid->domain().bounding_box();
  std::array<double, kMaxDim> lo{}, len{};
  for (int k = 0; k < n; ++k) {
    lo[k] = bb.lo.x[k].to_double();
    len[k] = bb.side(k).to_double();
  }
  const double two_pi = 6.283185307179586476925286766559;
  for (int m = 0; m < modes; ++m) {
    double amp = rng.normal() / static_cast<double>(modes);
    double phase = rng.uniform(0.0, two_pi);
    std::array<double, kMaxDim> freq{};
    for (int k = 0; k < n; ++k) freq[k] = rng.uniform(-max_freq, max_freq) / len[k];
    for (size_t i = 0; i < f.v.size(); ++i) {
      double arg = phase;
      for (int k = 0; k < n; ++k) arg += two_pi * freq[k] * (f.grid->mid(k)[i] - lo[k]);
      f.v[i] += amp * std::cos(arg);
    }
  }
  return f;
}

Field make_radial_bump(GridPtr grid, std::array<double, kMaxDim> center, double sigma) {
  Field f;
  f.grid = std::move(grid);
  f.v.resize(f.grid->size());
  f.id = "bump";
  const int n = f.grid->dim();
  for (size_t i = 0; i < f.v.size(); ++i) {
    double r2 = 0;
    for (int k = 0; k < n; ++k) {
      double d = f.grid->mid(k)[i] - center[k];
      r2 += d * d;
    }
    f.v[i] = std::exp(-r2 / (sigma * sigma));
  }
  return f;
}

namespace {
double cheb(int deg, double x) {
  // T_deg on [-1, 1]
  if (deg == 0) return 1.0;
  double tm = 1.0, t = x;
  for (int i = 1; i < deg; ++i) {
    double next = 2.0 * x * t - tm;
    tm = t;
    t = next;
  }
  return t;
}
}  // namespace

Field make_chebyshev(GridPtr grid, const std::vector<int>& degree) {
  Field f;
  f.grid = std::move(grid);
  f.v.assign(f.grid->size(), 1.0);
  f.id = "cheb";
  const int n = f.grid->dim();
  BoxR bb = f.grid->domain().bounding_box();
  for (int k = 0; k < n; ++k) {
    double lo = bb.lo.x[k].to_double(), hi = bb.hi.x[k].to_double();
    int deg = k < static_cast<int>(degree.size()) ? degree[k] : 0;
    for (size_t i = 0; i < f.v.size(); ++i) {
      double t = 2.0 * (f.grid->mid(k)[i] - lo) / (hi - lo) - 1.0;
      f.v[i] *= cheb(deg, t);
    }
  }
  return f;
}

Field make_uniform_random(GridPtr grid, uint64_t seed) {
  Field f;
  f.grid = std::move(grid);
  f.v.resize(f.grid->size());
  f.id = "uniform:" + std::to_string(seed);
  Rng rng(seed);
  for (auto& x : f.v) x = rng.uniform01();
  return f;
}

void remove_mean(Field& f) {
  double s = 0;
  for (double x : f.v) s += x;
  double mean = s / static_cast<double>(f.v.size());
  for (auto& x : f.v) x -= mean;
}

std::vector<Field> make_field_batch(GridPtr grid, const std::string& spec, uint64_t seed) {
  std::vector<Field> out;
  auto colon = spec.find(':');
  std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "random") {
    int count = arg.empty() ? 1 : std::stoi(arg);
    for (int i = 0; i < count; ++i) out.push_back(make_band_limited(grid, seed + i));
  } else if (kind == "coord") {
    out.push_back(make_coordinate(grid, arg.empty() ? 0 : std::stoi(arg)));
  } else if (kind == "bump") {
    BoxR bb = grid->domain().bounding_box();
    std::array<double, kMaxDim> c{};
    double diam = 0;
    for (int k = 0; k < grid->dim(); ++k) {
      c[k] = bb.center().x[k].to_double();
      diam += bb.side(k).to_double() * bb.side(k).to_double();
    }
    out.push_back(make_radial_bump(grid, c, 0.3 * std::sqrt(diam)));
  } else if (kind == "cheb") {
    int deg = arg.empty() ? 2 : std::stoi(arg);
    std::vector<int> degs(grid->dim(), deg);
    out.push_back(make_chebyshev(grid, degs));
  } else {
    throw std::invalid_argument("unknown field family: " + spec);
  }
  return out;
}

}  // namespace fracpoin
