#include "eqconj/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace eqconj::kernels {
namespace {

void stencil_gather_neon(const double* src, const std::int32_t* idx, const double* w,
                         std::size_t taps, std::size_t n, double* out) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t s = 0; s < taps; ++s) {
      const std::int32_t* ii = idx + s * n + j;
      float64x2_t vs = vdupq_n_f64(src[ii[0]]);
      vs = vsetq_lane_f64(src[ii[1]], vs, 1);
      acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(w + s * n + j), vs));
    }
    vst1q_f64(out + j, acc);
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t s = 0; s < taps; ++s) acc = acc + w[s * n + j] * src[idx[s * n + j]];
    out[j] = acc;
  }
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void hadamard_neon(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_neon(double s, double* y, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(vld1q_f64(y + i), vs));
  for (; i < n; ++i) y[i] = y[i] * s;
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table{"neon", stencil_gather_neon, axpy_neon, hadamard_neon,
                                 scale_neon};
  return &table;
}

}  // namespace eqconj::kernels

#else

namespace eqconj::kernels {
const KernelTable* neon_table() { return nullptr; }
}  // namespace eqconj::kernels

#endif
