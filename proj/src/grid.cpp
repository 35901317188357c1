#include "eqconj/grid.hpp"

#include <algorithm>
#include <string>

namespace eqconj {

MonotoneCircleMap::MonotoneCircleMap(std::vector<double> lift, long degree)
    : lift_(std::move(lift)), degree_(degree) {
  if (lift_.size() < 2) throw InvalidArgument("MonotoneCircleMap needs at least 2 nodes");
  if (degree_ < 1) throw InvalidArgument("MonotoneCircleMap degree must be positive");
  for (std::size_t k = 0; k < lift_.size(); ++k) {
    if (!std::isfinite(lift_[k])) throw InvalidArgument("MonotoneCircleMap: non-finite lift value");
    if (!(node(k + 1) > node(k))) {
      throw ResolutionError("sampled lift is not strictly increasing at node " + std::to_string(k));
    }
  }
}

MonotoneCircleMap MonotoneCircleMap::linear(std::size_t n, long degree) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = static_cast<double>(degree) * static_cast<double>(k) / static_cast<double>(n);
  }
  return MonotoneCircleMap(std::move(v), degree);
}

MonotoneCircleMap MonotoneCircleMap::blend(const MonotoneCircleMap& a, const MonotoneCircleMap& b,
                                           double s) {
  if (a.size() != b.size() || a.degree() != b.degree()) {
    throw InvalidArgument("MonotoneCircleMap::blend: incompatible maps");
  }
  if (s == 0.0) return a;
  if (s == 1.0) return b;
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = (1.0 - s) * a.lift_[k] + s * b.lift_[k];
  return MonotoneCircleMap(std::move(v), a.degree());
}

double MonotoneCircleMap::operator()(double t) const {
  const double q = std::floor(t);
  const std::size_t n = lift_.size();
  const GridLocation loc = locate(t - q, n);
  double shift = q * static_cast<double>(degree_);
  // locate wraps values within rounding of 1 onto node 0 of the next period.
  if (loc.k == 0 && loc.frac == 0.0 && t - q > 0.5) shift += static_cast<double>(degree_);
  const double lo = node(loc.k);
  if (loc.frac == 0.0) return lo + shift;
  return lo + loc.frac * (node(loc.k + 1) - lo) + shift;
}

double MonotoneCircleMap::slope(double t) const {
  const std::size_t n = lift_.size();
  const GridLocation loc = locate(t, n);
  return (node(loc.k + 1) - node(loc.k)) * static_cast<double>(n);
}

double MonotoneCircleMap::inverse(double t) const {
  const double deg = static_cast<double>(degree_);
  const double base = lift_.front();
  const double q = std::floor((t - base) / deg);
  double s = t - q * deg;
  if (s < base) s = base;
  const std::size_t n = lift_.size();
  // First node strictly above s; the preimage lies in the piece before it.
  auto it = std::upper_bound(lift_.begin(), lift_.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - lift_.begin()) - 1;
  const double lo = node(k);
  const double hi = node(k + 1);
  double frac = (s - lo) / (hi - lo);
  frac = std::clamp(frac, 0.0, 1.0);
  return (static_cast<double>(k) + frac) / static_cast<double>(n) + q;
}

MonotoneCircleMap cdf_of(const DiscreteMeasure& m) {
  const std::size_t n = m.size();
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::max(m[i], 1e-300);
    total += w[i];
  }
  std::vector<double> c(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = acc / total;
    acc += w[i];
  }
  return MonotoneCircleMap(std::move(c), 1);
}

NodeCdf NodeCdf::of(std::span<const double> w) {
  const std::size_t n = w.size();
  std::vector<double> v(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = std::max(w[i], 1e-300);
    total += v[i];
  }
  std::vector<double> c(n);
  double acc = -0.5 * v[0];
  for (std::size_t i = 0; i < n; ++i) {
    acc += v[i];
    c[i] = acc / total;
  }
  return NodeCdf(MonotoneCircleMap(std::move(c), 1));
}

double inverse(const MonotoneCircleMap& c, double t) { return c.inverse(t); }

}  // namespace eqconj
