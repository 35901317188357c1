#pragma once

// Sparse linear maps along one axis of a Field, stored tap-major for the
// gather kernel: out[j] = sum_s w[s*n_out + j] * in[idx[s*n_out + j]].

#include <cstdint>
#include <vector>

#include "eqconj/grid.hpp"
#include "eqconj/kernels.hpp"

namespace eqconj {

struct AxisStencil {
  std::size_t n_in = 0;
  std::size_t n_out = 0;
  std::size_t taps = 0;
  std::vector<std::int32_t> idx;
  std::vector<double> w;
};

// Piecewise-linear interpolation from the n-point grid onto the d*n-point
// grid of all E_d preimages of nodes (fine index m <-> m / (d n)).
AxisStencil prolong_stencil(std::size_t n, long d);
// Sum over the d preimages: out[l] = sum_k in[l + k n].
AxisStencil fold_stencil(std::size_t n, long d);
// Node values along the orbit map: out[i] = in[d i mod n].
AxisStencil orbit_stencil(std::size_t n, long d);
// out[j] = in[idx[j]].
AxisStencil gather_stencil(std::size_t n_in, const std::vector<std::int32_t>& idx);
// Matrix transpose, taps ordered by input index and zero-padded.
AxisStencil transpose(const AxisStencil& s);

// Applies s along the given axis.
template <std::size_t D>
Field<D> apply_axis(const Field<D>& in, std::size_t axis, const AxisStencil& s) {
  if (in.extent(axis) != s.n_in) throw InvalidArgument("apply_axis: extent mismatch");
  Shape<D> shape = in.shape();
  shape[axis] = s.n_out;
  Field<D> out(shape);
  std::size_t outer = 1;
  std::size_t inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
  for (std::size_t a = axis + 1; a < D; ++a) inner *= shape[a];
  if (inner == 1) {
    for (std::size_t o = 0; o < outer; ++o) {
      kernels::stencil_gather({in.data() + o * s.n_in, s.n_in}, s.idx, s.w, s.taps,
                              {out.data() + o * s.n_out, s.n_out});
    }
    return out;
  }
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t j = 0; j < s.n_out; ++j) {
      std::span<double> dst{out.data() + (o * s.n_out + j) * inner, inner};
      for (std::size_t t = 0; t < s.taps; ++t) {
        const double w = s.w[t * s.n_out + j];
        if (w == 0.0) continue;
        const std::size_t src = static_cast<std::size_t>(s.idx[t * s.n_out + j]);
        kernels::axpy(w, {in.data() + (o * s.n_in + src) * inner, inner}, dst);
      }
    }
  }
  return out;
}

}  // namespace eqconj
