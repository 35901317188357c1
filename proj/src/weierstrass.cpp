#include "eqconj/weierstrass.hpp"

#include <algorithm>
#include <cmath>

#include "eqconj/errors.hpp"

namespace eqconj {

WeierstrassShear::WeierstrassShear(TrigPotential alpha, long d, int K, std::size_t n)
    : alpha_(std::move(alpha)), d_(d), K_(K), beta_(Shape<1>{n}) {
  if (d < 2) throw InvalidArgument("weierstrass: d must be at least 2");
  if (K < 1) throw InvalidArgument("weierstrass: K must be at least 1");
  if (alpha_.dim() != 1) throw InvalidArgument("weierstrass: alpha must be a function on the circle");
  const CircleGrid g(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    double scale = 1.0 / static_cast<double>(d);
    std::size_t j = i;
    for (int k = 0; k < K; ++k) {
      acc += scale * alpha_(g.point(j));
      scale /= static_cast<double>(d);
      j = g.times(j, d);
    }
    beta_[i] = acc;
  }
}

double WeierstrassShear::beta_at(double x) const {
  double t = wrap01(x);
  const CircleGrid g(beta_.size());
  const GridLocation loc = locate(t, g.size());
  if (loc.frac == 0.0) return beta_[loc.k];
  double acc = 0.0;
  double scale = 1.0 / static_cast<double>(d_);
  for (int k = 0; k < K_; ++k) {
    acc += scale * alpha_(t);
    scale /= static_cast<double>(d_);
    t = wrap01(static_cast<double>(d_) * t);
  }
  return acc;
}

double WeierstrassShear::identity_residual(double x) const {
  const double t = wrap01(x);
  const double r = alpha_(t) + beta_at(wrap01(static_cast<double>(d_) * t)) - static_cast<double>(d_) * beta_at(t);
  return torus_distance(r, 0.0);
}

double WeierstrassShear::sup_residual(const std::vector<double>& extra) const {
  const CircleGrid g(beta_.size());
  double out = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) out = std::max(out, identity_residual(g.point(i)));
  for (double x : extra) out = std::max(out, identity_residual(x));
  return out;
}

double WeierstrassShear::truncation_bound() const {
  double amp = 0.0;
  for (const TrigTerm& t : alpha_.terms()) amp += std::abs(t.amplitude);
  const double dd = static_cast<double>(d_);
  return std::pow(dd, 1.0 - K_) * amp / (dd - 1.0);
}

WeierstrassShear weierstrass_shear(const TrigPotential& alpha, long d, int K, std::size_t n) {
  return WeierstrassShear(alpha, d, K, n);
}

ModulusReport modulus_estimate(const GridFunction1D& f, std::size_t min_shift, std::size_t max_shift) {
  const std::size_t n = f.size();
  if (max_shift == 0) max_shift = n / 8;
  if (min_shift == 0 || min_shift > max_shift || max_shift >= n) {
    throw InvalidArgument("modulus_estimate: shift range invalid");
  }
  ModulusReport rep;
  for (std::size_t m = min_shift; m <= max_shift; m *= 2) {
    double w = 0.0;
    for (std::size_t i = 0; i + m < n; ++i) w = std::max(w, std::abs(f[i + m] - f[i]));
    rep.delta.push_back(static_cast<double>(m) / static_cast<double>(n));
    rep.omega.push_back(w);
  }
  const std::size_t k = rep.delta.size();
  if (k < 2) throw InvalidArgument("modulus_estimate: need at least two scales");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double x = std::log(rep.delta[i]);
    const double y = std::log(std::max(rep.omega[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double kk = static_cast<double>(k);
  rep.slope = (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
  const double icept = (sy - rep.slope * sx) / kk;
  double ss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = std::log(std::max(rep.omega[i], 1e-300)) - (icept + rep.slope * std::log(rep.delta[i]));
    ss += r * r;
  }
  rep.fit_residual = std::sqrt(ss / kk);
  return rep;
}

}  // namespace eqconj
