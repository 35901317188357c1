#include "eqconj/stencil.hpp"

#include <algorithm>
#include <tuple>

namespace eqconj {
namespace {

AxisStencil from_rows(std::size_t n_in, std::size_t n_out,
                      const std::vector<std::vector<std::pair<std::int32_t, double>>>& rows) {
  AxisStencil s;
  s.n_in = n_in;
  s.n_out = n_out;
  for (const auto& r : rows) s.taps = std::max(s.taps, r.size());
  s.idx.assign(s.taps * n_out, 0);
  s.w.assign(s.taps * n_out, 0.0);
  for (std::size_t j = 0; j < n_out; ++j) {
    for (std::size_t t = 0; t < rows[j].size(); ++t) {
      s.idx[t * n_out + j] = rows[j][t].first;
      s.w[t * n_out + j] = rows[j][t].second;
    }
  }
  return s;
}

void check_degree(long d) {
  if (d < 2) throw InvalidArgument("expanding degree d must be at least 2");
}

}  // namespace

AxisStencil prolong_stencil(std::size_t n, long d) {
  check_degree(d);
  const std::size_t nf = n * static_cast<std::size_t>(d);
  std::vector<std::vector<std::pair<std::int32_t, double>>> rows(nf);
  for (std::size_t m = 0; m < nf; ++m) {
    const std::size_t a = m / static_cast<std::size_t>(d);
    const std::size_t r = m % static_cast<std::size_t>(d);
    const double t = static_cast<double>(r) / static_cast<double>(d);
    rows[m].emplace_back(static_cast<std::int32_t>(a), 1.0 - t);
    rows[m].emplace_back(static_cast<std::int32_t>((a + 1) % n), t);
  }
  return from_rows(n, nf, rows);
}

AxisStencil fold_stencil(std::size_t n, long d) {
  check_degree(d);
  std::vector<std::vector<std::pair<std::int32_t, double>>> rows(n);
  for (std::size_t l = 0; l < n; ++l) {
    for (long k = 0; k < d; ++k) {
      rows[l].emplace_back(static_cast<std::int32_t>(l + static_cast<std::size_t>(k) * n), 1.0);
    }
  }
  return from_rows(n * static_cast<std::size_t>(d), n, rows);
}

AxisStencil orbit_stencil(std::size_t n, long d) {
  const CircleGrid g(n);
  std::vector<std::vector<std::pair<std::int32_t, double>>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i].emplace_back(static_cast<std::int32_t>(g.times(i, d)), 1.0);
  return from_rows(n, n, rows);
}

AxisStencil gather_stencil(std::size_t n_in, const std::vector<std::int32_t>& idx) {
  std::vector<std::vector<std::pair<std::int32_t, double>>> rows(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] < 0 || static_cast<std::size_t>(idx[j]) >= n_in) throw InvalidArgument("gather index out of range");
    rows[j].emplace_back(idx[j], 1.0);
  }
  return from_rows(n_in, idx.size(), rows);
}

AxisStencil transpose(const AxisStencil& s) {
  std::vector<std::vector<std::pair<std::int32_t, double>>> rows(s.n_in);
  for (std::size_t j = 0; j < s.n_out; ++j) {
    for (std::size_t t = 0; t < s.taps; ++t) {
      const double w = s.w[t * s.n_out + j];
      if (w == 0.0) continue;
      rows[static_cast<std::size_t>(s.idx[t * s.n_out + j])].emplace_back(static_cast<std::int32_t>(j), w);
    }
  }
  for (auto& r : rows) std::sort(r.begin(), r.end());
  return from_rows(s.n_out, s.n_in, rows);
}

}  // namespace eqconj
