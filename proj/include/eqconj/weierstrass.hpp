#pragma once

// The shear (x, y) -> (d x, d y + alpha(x)) and its Weierstrass conjugacy
// beta(x) = (1/d) sum_{k<K} d^{-k} alpha(d^k x), with alpha + beta o E_d = d beta mod 1
// up to the truncation term d^{-K} alpha(d^K x).

#include <cstddef>
#include <vector>

#include "eqconj/grid.hpp"
#include "eqconj/potential.hpp"

namespace eqconj {

class WeierstrassShear {
 public:
  WeierstrassShear(TrigPotential alpha, long d, int K, std::size_t n);

  const TrigPotential& alpha() const noexcept { return alpha_; }
  long degree() const noexcept { return d_; }
  int terms() const noexcept { return K_; }
  // beta sampled at the n grid nodes.
  const GridFunction1D& beta() const noexcept { return beta_; }

  // Series evaluated at any x; the orbit d^k x mod 1 is exact on grid nodes.
  double beta_at(double x) const;
  // |alpha(x) + beta(d x) - d beta(x)| reduced mod 1.
  double identity_residual(double x) const;
  // Sup of the residual over the grid nodes and the given extra points.
  double sup_residual(const std::vector<double>& extra = {}) const;
  // d^{1-K} sup|alpha| / (d - 1).
  double truncation_bound() const;

 private:
  TrigPotential alpha_;
  long d_;
  int K_;
  GridFunction1D beta_;
};

WeierstrassShear weierstrass_shear(const TrigPotential& alpha, long d, int K, std::size_t n);

struct ModulusReport {
  double slope = 0.0;
  // RMS residual of the log-log fit.
  double fit_residual = 0.0;
  std::vector<double> delta;
  std::vector<double> omega;
};

// Least-squares fit of log sup_x |f(x + delta) - f(x)| against log delta over
// dyadic delta = 2^j / n, using only pairs that do not wrap around the period.
ModulusReport modulus_estimate(const GridFunction1D& f, std::size_t min_shift = 1, std::size_t max_shift = 0);

}  // namespace eqconj
