// Compiled with -mavx2 (no -mfma). Only reached after a runtime CPU check.
#include "eqconj/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)
#include <immintrin.h>

namespace eqconj::kernels {
namespace {

void stencil_gather_avx2(const double* src, const std::int32_t* idx, const double* w,
                         std::size_t taps, std::size_t n, double* out) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t s = 0; s < taps; ++s) {
      const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + s * n + j));
      const __m256d vs = _mm256_i32gather_pd(src, vi, 8);
      const __m256d vw = _mm256_loadu_pd(w + s * n + j);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(vw, vs));
    }
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t s = 0; s < taps; ++s) acc = acc + w[s * n + j] * src[idx[s * n + j]];
    out[j] = acc;
  }
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void hadamard_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_avx2(double s, double* y, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), vs));
  for (; i < n; ++i) y[i] = y[i] * s;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{"avx2", stencil_gather_avx2, axpy_avx2, hadamard_avx2,
                                 scale_avx2};
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") ? &table : nullptr;
}

}  // namespace eqconj::kernels

#else

namespace eqconj::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace eqconj::kernels

#endif
