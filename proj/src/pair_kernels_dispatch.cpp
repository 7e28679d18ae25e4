#include "fracpoin/pair_kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace fracpoin::kern {

void row_power_n2_scalar(const RowCtx&, const double*, const double*, const double*, size_t,
                         double[4], uint32_t*, size_t*);
#if defined(FRACPOIN_HAVE_AVX2)
void row_power_n2_avx2(const RowCtx&, const double*, const double*, const double*, size_t,
                       double[4], uint32_t*, size_t*);
#endif

bool avx2_supported() {
#if defined(FRACPOIN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

Backend pick_backend() {
  const char* env = std::getenv("FRACPOIN_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Backend::Avx2;
    return Backend::Scalar;
  }
  return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend b = pick_backend();
  return b;
}

const char* backend_name() { return active_backend() == Backend::Avx2 ? "avx2" : "scalar"; }

RowFn row_power_n2_backend(Backend b) {
#if defined(FRACPOIN_HAVE_AVX2)
  if (b == Backend::Avx2 && avx2_supported()) return &row_power_n2_avx2;
#else
  (void)b;
#endif
  return &row_power_n2_scalar;
}

RowFn row_power_n2() { return row_power_n2_backend(active_backend()); }

}  // namespace fracpoin::kern
