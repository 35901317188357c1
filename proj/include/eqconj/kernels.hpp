#pragma once

// Inner-loop kernels behind every transfer-operator application.
//
// Each kernel has a scalar reference and optional AVX2 / NEON variants that
// perform the same IEEE operations in the same order per output element, so
// results are bit-identical across variants (tests/test_kernels.cpp).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace eqconj::kernels {

struct KernelTable {
  const char* name;
  // out[j] = sum_{s < taps} w[s*n + j] * src[idx[s*n + j]], summed from s = 0
  // starting at +0.0.
  void (*stencil_gather)(const double* src, const std::int32_t* idx, const double* w,
                         std::size_t taps, std::size_t n, double* out);
  // y[i] = y[i] + a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*hadamard)(const double* a, const double* b, double* out, std::size_t n);
  // y[i] = y[i] * s
  void (*scale)(double s, double* y, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the variant is not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// The table used by the library. Chosen once at first use: the best supported
// variant, unless EQCONJ_KERNELS=scalar|avx2|neon overrides it.
const KernelTable& active();

// Overrides the active table; returns false if the named variant is unavailable.
bool select(std::string_view name);

std::vector<std::string_view> available();

// Thin typed wrappers over active().
void stencil_gather(std::span<const double> src, std::span<const std::int32_t> idx,
                    std::span<const double> w, std::size_t taps, std::span<double> out);
void axpy(double a, std::span<const double> x, std::span<double> y);
void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out);
void scale(double s, std::span<double> y);

}  // namespace eqconj::kernels
