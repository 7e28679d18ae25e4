#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace fracpoin {

// Seeded RNG with explicit value-to-double transforms. The standard
// distributions are implementation-defined, so uniform/normal draws go
// through fixed formulas to keep every seeded run replayable.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  double uniform01() {  // in [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  uint64_t below(uint64_t n) { return eng_() % n; }

  double normal() {
    // Box-Muller, one value per call; deterministic across platforms.
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Fixed-order pairwise reduction; the result depends only on the input
// order, never on thread count.
inline double pairwise_sum(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  std::vector<double> cur = v;
  while (cur.size() > 1) {
    std::vector<double> next((cur.size() + 1) / 2);
    for (size_t i = 0; i + 1 < cur.size(); i += 2) next[i / 2] = cur[i] + cur[i + 1];
    if (cur.size() & 1) next.back() = cur.back();
    cur.swap(next);
  }
  return cur[0];
}

inline int thread_count() {
  if (const char* env = std::getenv("FRACPOIN_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(block) for block = 0..nblocks-1 on up to thread_count() threads.
// Each block writes only its own output slot, so results are deterministic.
template <typename Fn>
void parallel_blocks(int nblocks, Fn&& fn) {
  int nt = std::min(thread_count(), nblocks);
  if (nt <= 1) {
    for (int b = 0; b < nblocks; ++b) fn(b);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([=, &fn]() {
      for (int b = t; b < nblocks; b += nt) fn(b);
    });
  }
  for (auto& th : pool) th.join();
}

inline std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace fracpoin
