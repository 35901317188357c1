#include "eqconj/kernels.hpp"

namespace eqconj::kernels {
namespace {

void stencil_gather_scalar(const double* src, const std::int32_t* idx, const double* w,
                           std::size_t taps, std::size_t n, double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t s = 0; s < taps; ++s) {
      acc = acc + w[s * n + j] * src[idx[s * n + j]];
    }
    out[j] = acc;
  }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void hadamard_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_scalar(double s, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] * s;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", stencil_gather_scalar, axpy_scalar, hadamard_scalar,
                                 scale_scalar};
  return table;
}

}  // namespace eqconj::kernels
