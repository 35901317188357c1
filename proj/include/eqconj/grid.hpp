#pragma once

// Uniform periodic grids, sampled fields with multilinear interpolation,
// discrete measures and monotone circle maps.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "eqconj/errors.hpp"

namespace eqconj {

// t mod 1 in [0, 1).
inline double wrap01(double t) {
  const double s = t - std::floor(t);
  return s >= 1.0 ? 0.0 : s;
}

// Distance on R/Z.
inline double torus_distance(double a, double b) {
  const double s = a - b + 0.5;
  return std::abs(s - std::floor(s) - 0.5);
}

// Node k and fractional offset of t on an n-point periodic grid, with t
// snapped onto a node when it lies within rounding of one.
struct GridLocation {
  std::size_t k;
  double frac;
};

inline GridLocation locate(double t, std::size_t n) {
  const double p = wrap01(t) * static_cast<double>(n);
  double r = std::nearbyint(p);
  if (std::abs(p - r) <= 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + p)) {
    if (r >= static_cast<double>(n)) r = 0.0;
    return {static_cast<std::size_t>(r), 0.0};
  }
  double k = std::floor(p);
  if (k >= static_cast<double>(n)) k = static_cast<double>(n - 1);
  return {static_cast<std::size_t>(k), p - k};
}

class CircleGrid {
 public:
  explicit CircleGrid(std::size_t n) : n_(n) {
    if (n < 2) throw InvalidArgument("CircleGrid needs at least 2 points");
  }
  std::size_t size() const noexcept { return n_; }
  double point(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(n_);
  }
  double midpoint(std::size_t i) const noexcept {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n_);
  }
  // Index of the node d * x_i mod 1.
  std::size_t times(std::size_t i, long d) const noexcept {
    const long n = static_cast<long>(n_);
    return static_cast<std::size_t>(((static_cast<long>(i) * d) % n + n) % n);
  }
  bool operator==(const CircleGrid&) const = default;

 private:
  std::size_t n_;
};

template <std::size_t D>
using Shape = std::array<std::size_t, D>;

template <std::size_t D>
std::size_t shape_size(const Shape<D>& s) {
  return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
}

// Values on the product grid prod_a {i / n_a}, row-major (last axis fastest),
// periodic multilinear interpolation between nodes.
template <std::size_t D>
class Field {
 public:
  Field() = default;
  explicit Field(Shape<D> shape, double fill = 0.0)
      : shape_(shape), values_(shape_size(shape), fill) {}
  Field(Shape<D> shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
    if (values_.size() != shape_size(shape_)) throw InvalidArgument("Field: value count mismatch");
  }

  const Shape<D>& shape() const noexcept { return shape_; }
  std::size_t extent(std::size_t axis) const noexcept { return shape_[axis]; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& storage() noexcept { return values_; }
  const std::vector<double>& storage() const noexcept { return values_; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  double& operator[](std::size_t flat) noexcept { return values_[flat]; }
  double operator[](std::size_t flat) const noexcept { return values_[flat]; }

  std::size_t flat(const Shape<D>& idx) const noexcept {
    std::size_t f = 0;
    for (std::size_t a = 0; a < D; ++a) f = f * shape_[a] + idx[a];
    return f;
  }
  double& at(const Shape<D>& idx) noexcept { return values_[flat(idx)]; }
  double at(const Shape<D>& idx) const noexcept { return values_[flat(idx)]; }

  // Row of the last axis at the given leading indices.
  std::span<const double> row(std::size_t r) const noexcept {
    const std::size_t n = shape_[D - 1];
    return {values_.data() + r * n, n};
  }
  std::span<double> row(std::size_t r) noexcept {
    const std::size_t n = shape_[D - 1];
    return {values_.data() + r * n, n};
  }
  // Contiguous block of index i along axis 0.
  std::span<const double> slab(std::size_t i) const noexcept {
    const std::size_t n = values_.size() / shape_[0];
    return {values_.data() + i * n, n};
  }
  std::span<double> slab(std::size_t i) noexcept {
    const std::size_t n = values_.size() / shape_[0];
    return {values_.data() + i * n, n};
  }

  double eval(const std::array<double, D>& t) const {
    std::array<GridLocation, D> loc;
    for (std::size_t a = 0; a < D; ++a) loc[a] = locate(t[a], shape_[a]);
    double acc = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << D); ++corner) {
      double w = 1.0;
      Shape<D> idx;
      for (std::size_t a = 0; a < D; ++a) {
        const bool up = (corner >> (D - 1 - a)) & 1U;
        if (up && loc[a].frac == 0.0) {
          w = 0.0;
          break;
        }
        w *= up ? loc[a].frac : 1.0 - loc[a].frac;
        idx[a] = up ? (loc[a].k + 1) % shape_[a] : loc[a].k;
      }
      if (w != 0.0) acc += w * at(idx);
    }
    return acc;
  }

  template <class... T>
    requires(sizeof...(T) == D)
  double operator()(T... t) const {
    return eval({static_cast<double>(t)...});
  }

  double max() const { return *std::max_element(values_.begin(), values_.end()); }
  double min() const { return *std::min_element(values_.begin(), values_.end()); }

 private:
  Shape<D> shape_{};
  std::vector<double> values_;
};

using GridFunction1D = Field<1>;
using GridFunction2D = Field<2>;
using GridFunction3D = Field<3>;

// Samples f at the nodes of a grid of the given shape.
template <std::size_t D, class F>
Field<D> sample(const Shape<D>& shape, F&& f) {
  Field<D> out(shape);
  Shape<D> idx{};
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t r = flat;
    std::array<double, D> x;
    for (std::size_t a = D; a-- > 0;) {
      idx[a] = r % shape[a];
      r /= shape[a];
      x[a] = static_cast<double>(idx[a]) / static_cast<double>(shape[a]);
    }
    out[flat] = f(x);
  }
  return out;
}

inline GridFunction1D sample1d(std::size_t n, const std::function<double(double)>& f) {
  return sample<1>({n}, [&](const std::array<double, 1>& x) { return f(x[0]); });
}

// Cell weights on the cells prod_a [i_a/n_a, (i_a+1)/n_a); probability measure
// with piecewise-uniform density.
template <std::size_t D>
class CellMeasure {
 public:
  CellMeasure() = default;
  // Validates nonnegativity and renormalizes to total mass 1.
  explicit CellMeasure(Field<D> weights) : w_(std::move(weights)) {
    double total = 0.0;
    for (double v : w_.values()) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("measure weight negative or non-finite");
      total += v;
    }
    if (!(total > 0.0)) throw InvalidArgument("measure has zero mass");
    for (double& v : w_.values()) v /= total;
  }
  const Field<D>& weights() const noexcept { return w_; }
  const Shape<D>& shape() const noexcept { return w_.shape(); }
  double operator[](std::size_t flat) const noexcept { return w_[flat]; }
  std::size_t size() const noexcept { return w_.size(); }

  static CellMeasure lebesgue(const Shape<D>& shape) { return CellMeasure(Field<D>(shape, 1.0)); }

 private:
  Field<D> w_;
};

using DiscreteMeasure = CellMeasure<1>;

// Point masses at the grid nodes. Used where an exact discrete duality with
// the collocation operators is needed; cells() converts to piecewise-uniform
// cell weights by averaging the 2^D corners of every cell.
template <std::size_t D>
class NodeWeights {
 public:
  NodeWeights() = default;
  explicit NodeWeights(Field<D> w) : w_(std::move(w)) {
    double total = 0.0;
    for (double v : w_.values()) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("node weight negative or non-finite");
      total += v;
    }
    if (!(total > 0.0)) throw InvalidArgument("node weights have zero mass");
    for (double& v : w_.values()) v /= total;
  }
  const Field<D>& weights() const noexcept { return w_; }
  const Shape<D>& shape() const noexcept { return w_.shape(); }
  double operator[](std::size_t flat) const noexcept { return w_[flat]; }
  std::size_t size() const noexcept { return w_.size(); }

  CellMeasure<D> cells() const {
    const Shape<D>& s = w_.shape();
    Field<D> out(s);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
      Shape<D> idx{};
      std::size_t r = flat;
      for (std::size_t a = D; a-- > 0;) {
        idx[a] = r % s[a];
        r /= s[a];
      }
      double acc = 0.0;
      for (std::size_t corner = 0; corner < (std::size_t{1} << D); ++corner) {
        Shape<D> c = idx;
        for (std::size_t a = 0; a < D; ++a) {
          if ((corner >> a) & 1U) c[a] = (c[a] + 1) % s[a];
        }
        acc += w_.at(c);
      }
      out[flat] = acc;
    }
    return CellMeasure<D>(std::move(out));
  }

  double pair(const Field<D>& f) const {
    if (f.shape() != w_.shape()) throw InvalidArgument("NodeWeights::pair shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * w_[i];
    return acc;
  }

 private:
  Field<D> w_;
};

// Midpoint quadrature of g against cell weights.
template <std::size_t D, class G>
double integrate_fn(G&& g, const CellMeasure<D>& m) {
  const Shape<D>& s = m.shape();
  double acc = 0.0;
  for (std::size_t flat = 0; flat < m.size(); ++flat) {
    if (m[flat] == 0.0) continue;
    std::size_t r = flat;
    std::array<double, D> x;
    for (std::size_t a = D; a-- > 0;) {
      x[a] = (static_cast<double>(r % s[a]) + 0.5) / static_cast<double>(s[a]);
      r /= s[a];
    }
    acc += m[flat] * g(x);
  }
  return acc;
}

// Midpoint quadrature of the interpolated field against cell weights; the
// field is resampled by interpolation when grids differ.
template <std::size_t D>
double integrate(const Field<D>& f, const CellMeasure<D>& m) {
  return integrate_fn<D>([&](const std::array<double, D>& x) { return f.eval(x); }, m);
}

// Against Lebesgue measure on the field's own grid.
template <std::size_t D>
double integrate(const Field<D>& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v;
  return acc / static_cast<double>(f.size());
}

// Total variation distance 0.5 * sum |a - b|.
template <std::size_t D>
double total_variation(const CellMeasure<D>& a, const CellMeasure<D>& b) {
  if (a.shape() != b.shape()) throw InvalidArgument("total_variation shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

template <std::size_t D>
double total_variation(const NodeWeights<D>& a, const NodeWeights<D>& b) {
  if (a.shape() != b.shape()) throw InvalidArgument("total_variation shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

// Strictly increasing piecewise-linear lift L on an n-point grid with
// L(x + 1) = L(x) + degree. Stored as the node values L(k/n), k < n.
class MonotoneCircleMap {
 public:
  MonotoneCircleMap() = default;
  MonotoneCircleMap(std::vector<double> lift, long degree);

  static MonotoneCircleMap identity(std::size_t n) { return linear(n, 1); }
  // x -> degree * x.
  static MonotoneCircleMap linear(std::size_t n, long degree);
  // (1 - s) * a + s * b, nodewise; a and b must share grid and degree.
  static MonotoneCircleMap blend(const MonotoneCircleMap& a, const MonotoneCircleMap& b, double s);

  std::size_t size() const noexcept { return lift_.size(); }
  long degree() const noexcept { return degree_; }
  const std::vector<double>& lift() const noexcept { return lift_; }
  // Node value with periodic extension; k may be any integer >= 0.
  double node(std::size_t k) const noexcept {
    const std::size_t n = lift_.size();
    return lift_[k % n] + static_cast<double>(degree_) * static_cast<double>(k / n);
  }

  // Lift evaluated at any real t.
  double operator()(double t) const;
  // Lift inverse: the x with L(x) = t, by bisection on the node values.
  double inverse(double t) const;
  // Slope of the linear piece containing t.
  double slope(double t) const;

 private:
  std::vector<double> lift_;
  long degree_ = 1;
};

// c(k/n) = sum_{i<k} w_i. Weights are floored at 1e-300 and renormalized;
// throws ResolutionError if the result is still not strictly increasing.
MonotoneCircleMap cdf_of(const DiscreteMeasure& m);

// CDF of node weights with each atom spread uniformly over its dual cell
// [(k - 1/2) / n, (k + 1/2) / n], pinned to c(0) = 0. Piecewise linear with
// knots at the half nodes; stored as dual(k / n) = c((k + 1/2) / n).
class NodeCdf {
 public:
  NodeCdf() = default;
  explicit NodeCdf(MonotoneCircleMap dual) : dual_(std::move(dual)) {}
  // Weights are floored at 1e-300 and renormalized.
  static NodeCdf of(std::span<const double> w);
  static NodeCdf blend(const NodeCdf& a, const NodeCdf& b, double s) {
    return NodeCdf(MonotoneCircleMap::blend(a.dual_, b.dual_, s));
  }

  std::size_t size() const noexcept { return dual_.size(); }
  long degree() const noexcept { return dual_.degree(); }
  const MonotoneCircleMap& dual() const noexcept { return dual_; }
  double half() const noexcept { return 0.5 / static_cast<double>(dual_.size()); }

  double operator()(double t) const { return dual_(t - half()); }
  double inverse(double u) const { return dual_.inverse(u) + half(); }
  // c(k / n) and c((k + 1/2) / n).
  double node(std::size_t k) const { return (*this)(static_cast<double>(k) / static_cast<double>(size())); }
  double half_node(std::size_t k) const noexcept { return dual_.node(k); }

 private:
  MonotoneCircleMap dual_;
};

// Inverse CDF of m evaluated at t (convenience: cdf_of(m).inverse(t)).
double inverse(const MonotoneCircleMap& c, double t);

// Resamples f on a finer or coarser grid by interpolation.
template <std::size_t D>
Field<D> resample(const Field<D>& f, const Shape<D>& shape) {
  return sample<D>(shape, [&](const std::array<double, D>& x) { return f.eval(x); });
}

}  // namespace eqconj
