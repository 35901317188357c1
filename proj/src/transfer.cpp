#include "eqconj/transfer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace eqconj {

template <std::size_t D>
TransferOperator<D>::TransferOperator(long d, const Shape<D>& shape, Field<D> weights)
    : d_(d), shape_(shape), weights_(std::move(weights)) {
  if (d < 2) throw InvalidArgument("expanding degree d must be at least 2");
  for (std::size_t a = 0; a < D; ++a) {
    if (weights_.extent(a) != shape[a] * static_cast<std::size_t>(d)) {
      throw InvalidArgument("transfer weights must live on the preimage lattice");
    }
    prolong_[a] = prolong_stencil(shape[a], d);
    restrict_[a] = transpose(prolong_[a]);
    fold_[a] = fold_stencil(shape[a], d);
    tile_[a] = transpose(fold_[a]);
  }
  for (double w : weights_.values()) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("branch weights must be positive and finite");
  }
}

template <std::size_t D>
Field<D> TransferOperator<D>::prolong(const Field<D>& psi) const {
  if (psi.shape() != shape_) throw InvalidArgument("TransferOperator: argument shape mismatch");
  Field<D> p = apply_axis(psi, 0, prolong_[0]);
  for (std::size_t a = 1; a < D; ++a) p = apply_axis(p, a, prolong_[a]);
  return p;
}

template <std::size_t D>
Field<D> TransferOperator<D>::apply(const Field<D>& psi) const {
  Field<D> p = prolong(psi);
  kernels::hadamard(weights_.values(), p.values(), p.values());
  for (std::size_t a = 0; a < D; ++a) p = apply_axis(p, a, fold_[a]);
  return p;
}

template <std::size_t D>
Field<D> TransferOperator<D>::apply_adjoint(const Field<D>& nu) const {
  if (nu.shape() != shape_) throw InvalidArgument("TransferOperator: argument shape mismatch");
  Field<D> q = apply_axis(nu, 0, tile_[0]);
  for (std::size_t a = 1; a < D; ++a) q = apply_axis(q, a, tile_[a]);
  kernels::hadamard(weights_.values(), q.values(), q.values());
  for (std::size_t a = 0; a < D; ++a) q = apply_axis(q, a, restrict_[a]);
  return q;
}

template class TransferOperator<1>;
template class TransferOperator<2>;
template class TransferOperator<3>;

namespace {

template <std::size_t D>
Shape<D> fine_of(const Shape<D>& shape, long d) {
  Shape<D> f = shape;
  for (auto& n : f) n *= static_cast<std::size_t>(d);
  return f;
}

template <std::size_t D>
Field<D> exp_field(Field<D> f) {
  for (double& v : f.values()) v = std::exp(v);
  return f;
}

}  // namespace

template <std::size_t D>
TransferOperator<D> make_transfer(const TrigPotential& phi, long d, const Shape<D>& shape) {
  if (d < 2) throw InvalidArgument("expanding degree d must be at least 2");
  return TransferOperator<D>(d, shape, exp_field(phi.sample<D>(fine_of(shape, d))));
}

template <std::size_t D>
TransferOperator<D> make_transfer(const Field<D>& phi, long d) {
  if (d < 2) throw InvalidArgument("expanding degree d must be at least 2");
  Field<D> p = apply_axis(phi, 0, prolong_stencil(phi.extent(0), d));
  for (std::size_t a = 1; a < D; ++a) p = apply_axis(p, a, prolong_stencil(phi.extent(a), d));
  return TransferOperator<D>(d, phi.shape(), exp_field(std::move(p)));
}

template <std::size_t D>
TransferOperator<D> make_transfer_fine(const Field<D>& phi_fine, long d, const Shape<D>& shape) {
  return TransferOperator<D>(d, shape, exp_field(phi_fine));
}

template TransferOperator<1> make_transfer<1>(const TrigPotential&, long, const Shape<1>&);
template TransferOperator<2> make_transfer<2>(const TrigPotential&, long, const Shape<2>&);
template TransferOperator<3> make_transfer<3>(const TrigPotential&, long, const Shape<3>&);
template TransferOperator<1> make_transfer<1>(const Field<1>&, long);
template TransferOperator<2> make_transfer<2>(const Field<2>&, long);
template TransferOperator<3> make_transfer<3>(const Field<3>&, long);
template TransferOperator<1> make_transfer_fine<1>(const Field<1>&, long, const Shape<1>&);
template TransferOperator<2> make_transfer_fine<2>(const Field<2>&, long, const Shape<2>&);
template TransferOperator<3> make_transfer_fine<3>(const Field<3>&, long, const Shape<3>&);

GridFunction1D apply_transfer_1d(const GridFunction1D& phi, long d, const GridFunction1D& psi) {
  return make_transfer<1>(phi, d).apply(psi);
}

GridFunction2D apply_transfer_2d(const GridFunction2D& phi, long d, const GridFunction2D& psi) {
  return make_transfer<2>(phi, d).apply(psi);
}

template <std::size_t D>
EigenData<D> solve_eigendata(const TransferOperator<D>& op, const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1) throw InvalidArgument("solver needs tol > 0 and max_iter >= 1");
  const Shape<D>& shape = op.shape();
  const std::size_t n = shape_size(shape);
  EigenData<D> out;

  Field<D> psi(shape, 1.0);
  double spread = INFINITY;
  double lambda = 0.0;
  int it = 0;
  while (it < cfg.max_iter) {
    ++it;
    Field<D> q = op.apply(psi);
    double log_sum = 0.0;
    double rmin = INFINITY;
    double rmax = 0.0;
    double qmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = q[i] / psi[i];
      log_sum += std::log(r);
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
      qmax = std::max(qmax, q[i]);
    }
    lambda = rmin == rmax ? rmin : std::exp(log_sum / static_cast<double>(n));
    spread = rmax / rmin - 1.0;
    kernels::scale(1.0 / qmax, q.values());
    psi = std::move(q);
    if (spread < cfg.tol) break;
  }
  if (!(spread < cfg.tol)) {
    std::ostringstream os;
    os << "eigenfunction power iteration did not converge in " << it
       << " iterations (ratio spread " << spread << "); raise max_iter or loosen tol";
    throw ConvergenceError(os.str(), spread, it);
  }
  out.iterations = it;

  Field<D> nu(shape, 1.0 / static_cast<double>(n));
  double change = INFINITY;
  int ait = 0;
  while (ait < cfg.max_iter) {
    ++ait;
    Field<D> q = op.apply_adjoint(nu);
    const double s = std::accumulate(q.values().begin(), q.values().end(), 0.0);
    kernels::scale(1.0 / s, q.values());
    change = 0.0;
    double qmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      change = std::max(change, std::abs(q[i] - nu[i]));
      qmax = std::max(qmax, q[i]);
    }
    change /= qmax;
    nu = std::move(q);
    if (change < cfg.tol) break;
  }
  if (!(change < cfg.tol)) {
    std::ostringstream os;
    os << "eigenmeasure power iteration did not converge in " << ait << " iterations (change "
       << change << "); raise max_iter or loosen tol";
    throw ConvergenceError(os.str(), change, ait);
  }
  out.adjoint_iterations = ait;

  out.nu_nodes = NodeWeights<D>(std::move(nu));
  const double pairing = out.nu_nodes.pair(psi);
  kernels::scale(1.0 / pairing, psi.values());
  out.h = std::move(psi);
  out.lambda = lambda;
  out.pressure = std::log(lambda);
  out.nu = out.nu_nodes.cells();

  const Field<D> lh = op.apply(out.h);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(lh[i] - lambda * out.h[i]));
  out.residual = res / out.h.max();
  return out;
}

template EigenData<1> solve_eigendata<1>(const TransferOperator<1>&, const SolverConfig&);
template EigenData<2> solve_eigendata<2>(const TransferOperator<2>&, const SolverConfig&);
template EigenData<3> solve_eigendata<3>(const TransferOperator<3>&, const SolverConfig&);

template <std::size_t D>
NormalizedPotential<D> normalize_potential(const TransferOperator<D>& op, const EigenData<D>& eig) {
  const long d = op.degree();
  const Shape<D>& shape = op.shape();
  Field<D> log_h = eig.h;
  for (double& v : log_h.values()) {
    if (!(v > 0.0)) throw InvalidArgument("normalize_potential needs a positive eigenfunction");
    v = std::log(v);
  }
  Field<D> tiled = log_h;
  for (std::size_t a = 0; a < D; ++a) tiled = apply_axis(tiled, a, transpose(fold_stencil(shape[a], d)));
  const Field<D> ph = op.prolong(eig.h);
  const double log_lambda = std::log(eig.lambda);

  NormalizedPotential<D> out;
  out.fine = Field<D>(op.fine_shape());
  for (std::size_t m = 0; m < out.fine.size(); ++m) {
    out.fine[m] = std::log(op.weights()[m]) + std::log(ph[m]) - tiled[m] - log_lambda;
  }
  out.nodes = Field<D>(shape);
  for (std::size_t flat = 0; flat < out.nodes.size(); ++flat) {
    Shape<D> idx{};
    std::size_t r = flat;
    for (std::size_t a = D; a-- > 0;) {
      idx[a] = (r % shape[a]) * static_cast<std::size_t>(d);
      r /= shape[a];
    }
    out.nodes[flat] = out.fine.at(idx);
  }
  const TransferOperator<D> normalized = make_transfer_fine<D>(out.fine, d, shape);
  const Field<D> one = normalized.apply(Field<D>(shape, 1.0));
  for (double v : one.values()) out.branch_sum_error = std::max(out.branch_sum_error, std::abs(v - 1.0));
  return out;
}

template NormalizedPotential<1> normalize_potential<1>(const TransferOperator<1>&, const EigenData<1>&);
template NormalizedPotential<2> normalize_potential<2>(const TransferOperator<2>&, const EigenData<2>&);
template NormalizedPotential<3> normalize_potential<3>(const TransferOperator<3>&, const EigenData<3>&);

template <std::size_t D>
EquilibriumState<D> equilibrium_state(const EigenData<D>& eig) {
  Field<D> w = eig.h;
  kernels::hadamard(eig.h.values(), eig.nu_nodes.weights().values(), w.values());
  EquilibriumState<D> out;
  out.nodes = NodeWeights<D>(std::move(w));
  out.cells = out.nodes.cells();
  return out;
}

template EquilibriumState<1> equilibrium_state<1>(const EigenData<1>&);
template EquilibriumState<2> equilibrium_state<2>(const EigenData<2>&);
template EquilibriumState<3> equilibrium_state<3>(const EigenData<3>&);

UlamResult ulam_oracle(const TrigPotential& phi, long d, std::size_t n, const SolverConfig& cfg) {
  if (phi.dim() != 1) throw InvalidArgument("ulam_oracle works on the circle");
  if (d < 2) throw InvalidArgument("expanding degree d must be at least 2");
  static constexpr std::array<double, 8> gx = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
      0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> gw = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
      0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  const std::size_t nf = n * static_cast<std::size_t>(d);
  const double hsub = 1.0 / static_cast<double>(nf);
  // c[m]: entry from cell m / d to cell m mod n.
  std::vector<double> c(nf);
  for (std::size_t m = 0; m < nf; ++m) {
    double acc = 0.0;
    for (std::size_t q = 0; q < gx.size(); ++q) {
      const double x = (static_cast<double>(m) + 0.5 * (gx[q] + 1.0)) * hsub;
      acc += gw[q] * std::exp(phi(x));
    }
    c[m] = static_cast<double>(nf) * acc * 0.5 * hsub;
  }
  const auto right = [&](const std::vector<double>& v) {
    std::vector<double> out(n, 0.0);
    for (std::size_t m = 0; m < nf; ++m) out[m % n] += c[m] * v[m / static_cast<std::size_t>(d)];
    return out;
  };
  const auto left = [&](const std::vector<double>& v) {
    std::vector<double> out(n, 0.0);
    for (std::size_t m = 0; m < nf; ++m) out[m / static_cast<std::size_t>(d)] += c[m] * v[m % n];
    return out;
  };
  const auto iterate = [&](auto&& op, int& iters) {
    std::vector<double> v(n, 1.0);
    double lambda = 0.0;
    for (iters = 1; iters <= cfg.max_iter; ++iters) {
      std::vector<double> q = op(v);
      double rmin = INFINITY;
      double rmax = 0.0;
      double qmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        rmin = std::min(rmin, q[i] / v[i]);
        rmax = std::max(rmax, q[i] / v[i]);
        qmax = std::max(qmax, q[i]);
      }
      lambda = std::accumulate(q.begin(), q.end(), 0.0) / std::accumulate(v.begin(), v.end(), 0.0);
      for (double& x : q) x /= qmax;
      v = std::move(q);
      if (rmax / rmin - 1.0 < cfg.tol) break;
    }
    return std::make_pair(lambda, v);
  };
  UlamResult out;
  int it_r = 0;
  int it_l = 0;
  auto [lambda, h] = iterate(right, it_r);
  auto [lambda_l, nu] = iterate(left, it_l);
  (void)lambda_l;
  out.lambda = lambda;
  out.iterations = std::max(it_r, it_l);
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) mu[i] = h[i] * nu[i];
  out.mu = DiscreteMeasure(Field<1>({n}, std::move(mu)));
  out.nu = DiscreteMeasure(Field<1>({n}, std::move(nu)));
  return out;
}

double periodic_orbit_pressure(const TrigPotential& phi, long d, int n_period) {
  if (phi.dim() != 1) throw InvalidArgument("periodic_orbit_pressure works on the circle");
  if (d < 2) throw InvalidArgument("expanding degree d must be at least 2");
  if (n_period < 1) throw InvalidArgument("period must be positive");
  const double bound = std::pow(static_cast<double>(d), n_period);
  if (bound > 16777216.0) throw InvalidArgument("d^n exceeds the 2^24 desk bound");
  const std::uint64_t count = static_cast<std::uint64_t>(bound) - 1;
  const Field<1> table = phi.sample<1>({static_cast<std::size_t>(count)});
  std::vector<double> sums(count);
  double smax = -INFINITY;
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t x = k;
    double s = 0.0;
    for (int j = 0; j < n_period; ++j) {
      s += table[x];
      x = (x * static_cast<std::uint64_t>(d)) % count;
    }
    sums[k] = s;
    smax = std::max(smax, s);
  }
  double acc = 0.0;
  for (double s : sums) acc += std::exp(s - smax);
  return (smax + std::log(acc)) / static_cast<double>(n_period);
}

}  // namespace eqconj
