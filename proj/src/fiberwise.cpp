#include "eqconj/fiberwise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace eqconj {

namespace {

Field<1> fiber_weights(const TrigPotential& phi2, double x, long d, std::size_t n) {
  if (phi2.dim() != 2) throw InvalidArgument("fiber operators need a potential on T^2");
  if (d < 2) throw InvalidArgument("expanding degree d must be at least 2");
  const std::size_t nf = n * static_cast<std::size_t>(d);
  Field<1> w({nf});
  for (std::size_t m = 0; m < nf; ++m) {
    w[m] = std::exp(phi2(x, static_cast<double>(m) / static_cast<double>(nf)));
  }
  return w;
}

std::vector<std::int32_t> iota_map(std::size_t count, auto&& f) {
  std::vector<std::int32_t> idx(count);
  for (std::size_t i = 0; i < count; ++i) idx[i] = static_cast<std::int32_t>(f(i));
  return idx;
}

// Piecewise-linear point evaluation at y on an n-point grid, as node weights.
std::vector<std::pair<std::size_t, double>> probe_weights(double y, std::size_t n) {
  const GridLocation loc = locate(y, n);
  if (loc.frac == 0.0) return {{loc.k, 1.0}};
  return {{loc.k, 1.0 - loc.frac}, {(loc.k + 1) % n, loc.frac}};
}

}  // namespace

FiberOperator::FiberOperator(const TrigPotential& phi2, double x, long d, std::size_t n_fiber)
    : op_(d, {n_fiber}, fiber_weights(phi2, x, d, n_fiber)) {}

GridFunction1D apply_fiber_operator(const TrigPotential& phi2, double x, long d, const GridFunction1D& psi) {
  return FiberOperator(phi2, x, d, psi.size()).apply(psi);
}

GridFunction1D iterate_fiber_operator(const TrigPotential& phi2, double x, long d, int k,
                                      const GridFunction1D& psi) {
  if (k < 0) throw InvalidArgument("iterate_fiber_operator needs k >= 0");
  GridFunction1D out = psi;
  double xi = wrap01(x);
  for (int j = 0; j < k; ++j) {
    out = apply_fiber_operator(phi2, xi, d, out);
    xi = wrap01(static_cast<double>(d) * xi);
  }
  return out;
}

template <std::size_t D>
FiberSolution<D> fiber_recursion(const TransferOperator<D>& op, const FamilyConfig& cfg, double probe) {
  const Shape<D>& s = op.shape();
  const long d = op.degree();
  const std::size_t nb = s[0];
  const std::size_t ud = static_cast<std::size_t>(d);
  std::size_t block = 1;
  for (std::size_t a = 1; a < D; ++a) block *= s[a];

  const Field<D> e_nodes = apply_axis(op.weights(), 0, gather_stencil(nb * ud, iota_map(nb, [&](std::size_t i) {
                                                                       return i * ud;
                                                                     })));
  const CircleGrid base(nb);
  const AxisStencil orbit = gather_stencil(nb, iota_map(nb, [&](std::size_t i) { return base.times(i, d); }));
  std::array<AxisStencil, D> tile;
  std::array<AxisStencil, D> restrict_;
  for (std::size_t a = 1; a < D; ++a) {
    tile[a] = transpose(fold_stencil(s[a], d));
    restrict_[a] = transpose(prolong_stencil(s[a], d));
  }

  Field<D> nu(s, 0.0);
  {
    std::vector<std::pair<std::size_t, double>> pw{{0, 1.0}};
    for (std::size_t a = 1; a < D; ++a) {
      std::vector<std::pair<std::size_t, double>> next;
      for (const auto& [off, w] : pw) {
        for (const auto& [k, wk] : probe_weights(probe, s[a])) next.emplace_back(off * s[a] + k, w * wk);
      }
      pw = std::move(next);
    }
    for (std::size_t i = 0; i < nb; ++i) {
      for (const auto& [off, w] : pw) nu[i * block + off] += w;
    }
  }

  FiberSolution<D> out;
  out.phi_nodes = GridFunction1D({nb});
  std::vector<double> phi_old(nb, 0.0);
  bool converged = false;
  double inc = INFINITY;
  int k = 0;
  while (k < cfg.fiber_k_max) {
    ++k;
    Field<D> src = apply_axis(nu, 0, orbit);
    for (std::size_t a = 1; a < D; ++a) src = apply_axis(src, a, tile[a]);
    kernels::hadamard(e_nodes.values(), src.values(), src.values());
    for (std::size_t a = 1; a < D; ++a) src = apply_axis(src, a, restrict_[a]);
    double inc_phi = 0.0;
    double inc_nu = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
      std::span<double> row{src.data() + i * block, block};
      const double z = std::accumulate(row.begin(), row.end(), 0.0);
      kernels::scale(1.0 / z, row);
      const double phi = std::log(z);
      inc_phi = std::max(inc_phi, std::abs(phi - phi_old[i]));
      phi_old[i] = phi;
      double l1 = 0.0;
      for (std::size_t j = 0; j < block; ++j) l1 += std::abs(row[j] - nu[i * block + j]);
      inc_nu = std::max(inc_nu, l1);
    }
    nu = std::move(src);
    inc = std::max(inc_phi, inc_nu);
    if (k >= 2 && inc <= cfg.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "fiber recursion did not converge in " << k << " rounds (increment " << inc
       << "); raise fiber_k_max or loosen tol";
    throw ConvergenceError(os.str(), inc, k);
  }
  std::copy(phi_old.begin(), phi_old.end(), out.phi_nodes.data());
  out.k_used = k;
  out.last_increment = inc;

  Field<D> src = apply_axis(nu, 0, gather_stencil(nb, iota_map(nb * ud, [&](std::size_t m) { return m % nb; })));
  for (std::size_t a = 1; a < D; ++a) src = apply_axis(src, a, tile[a]);
  kernels::hadamard(op.weights().values(), src.values(), src.values());
  std::size_t fine_block = 1;
  for (std::size_t a = 1; a < D; ++a) fine_block *= s[a] * ud;
  out.phi_fine = GridFunction1D({nb * ud});
  for (std::size_t m = 0; m < nb * ud; ++m) {
    const double* row = src.data() + m * fine_block;
    out.phi_fine[m] = std::log(std::accumulate(row, row + fine_block, 0.0));
  }
  out.nu = std::move(nu);
  return out;
}

template FiberSolution<2> fiber_recursion<2>(const TransferOperator<2>&, const FamilyConfig&, double);
template FiberSolution<3> fiber_recursion<3>(const TransferOperator<3>&, const FamilyConfig&, double);

template <std::size_t D>
std::pair<BasePotential, Field<D>> base_potential_and_measures(const TransferOperator<D>& op,
                                                              const FamilyConfig& cfg) {
  FiberSolution<D> a = fiber_recursion<D>(op, cfg, cfg.probes[0]);
  const FiberSolution<D> b = fiber_recursion<D>(op, cfg, cfg.probes[1]);
  BasePotential bp;
  bp.phi_base = a.phi_nodes;
  bp.phi_fine = a.phi_fine;
  bp.k_used = std::max(a.k_used, b.k_used);
  bp.last_increment = std::max(a.last_increment, b.last_increment);
  bp.y_probe = cfg.probes;
  for (std::size_t i = 0; i < a.phi_nodes.size(); ++i) {
    bp.probe_gap = std::max(bp.probe_gap, std::abs(a.phi_nodes[i] - b.phi_nodes[i]));
  }
  return {std::move(bp), std::move(a.nu)};
}

template std::pair<BasePotential, Field<2>> base_potential_and_measures<2>(const TransferOperator<2>&,
                                                                          const FamilyConfig&);
template std::pair<BasePotential, Field<3>> base_potential_and_measures<3>(const TransferOperator<3>&,
                                                                          const FamilyConfig&);

BasePotential base_potential(const TrigPotential& phi2, long d, const Shape<2>& shape, const FamilyConfig& cfg) {
  return base_potential_and_measures<2>(make_transfer<2>(phi2, d, shape), cfg).first;
}

namespace {

// Per base node: max over the fiber suite of the duality residual.
std::vector<double> duality_per_fiber(const TransferOperator<2>& op, const GridFunction1D& phi_nodes,
                                      const Field<2>& nu) {
  const Shape<2>& s = op.shape();
  const long d = op.degree();
  const std::size_t nb = s[0];
  const std::size_t nf = s[1];
  const std::size_t ud = static_cast<std::size_t>(d);
  const Field<2> e_nodes =
      apply_axis(op.weights(), 0, gather_stencil(nb * ud, iota_map(nb, [&](std::size_t i) { return i * ud; })));
  const AxisStencil prolong = prolong_stencil(nf, d);
  const AxisStencil fold = fold_stencil(nf, d);
  const CircleGrid base(nb);
  std::vector<double> worst(nb, 0.0);
  for (const TestFunction& psi : fiber_test_suite()) {
    const GridFunction1D p = sample1d(nf, [&](double y) { return psi(std::span<const double>(&y, 1)); });
    const GridFunction1D pf = apply_axis(p, 0, prolong);
    Field<2> lp({nb, nf * ud});
    for (std::size_t i = 0; i < nb; ++i) {
      kernels::hadamard(e_nodes.row(i), pf.values(), lp.row(i));
    }
    lp = apply_axis(lp, 1, fold);
    for (std::size_t i = 0; i < nb; ++i) {
      const std::size_t fi = base.times(i, d);
      double lhs = 0.0;
      double rhs = 0.0;
      for (std::size_t j = 0; j < nf; ++j) {
        lhs += nu.at({fi, j}) * lp.at({i, j});
        rhs += nu.at({i, j}) * p[j];
      }
      worst[i] = std::max(worst[i], std::abs(lhs - std::exp(phi_nodes[i]) * rhs));
    }
  }
  return worst;
}

}  // namespace

double fiber_duality_residual(const TransferOperator<2>& op, const GridFunction1D& phi_nodes, const Field<2>& nu) {
  const std::vector<double> w = duality_per_fiber(op, phi_nodes, nu);
  return *std::max_element(w.begin(), w.end());
}

std::size_t fiber_duality_worst(const TransferOperator<2>& op, const GridFunction1D& phi_nodes, const Field<2>& nu) {
  const std::vector<double> w = duality_per_fiber(op, phi_nodes, nu);
  return static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
}

ConditionalEigenmeasures conditional_eigenmeasures(const TrigPotential& phi2, long d, const Shape<2>& shape,
                                                   const FamilyConfig& cfg) {
  const TransferOperator<2> op = make_transfer<2>(phi2, d, shape);
  auto [bp, nu] = base_potential_and_measures<2>(op, cfg);
  ConditionalEigenmeasures out;
  out.duality_residual = fiber_duality_residual(op, bp.phi_base, nu);
  out.phi = std::move(bp);
  out.nu = std::move(nu);
  return out;
}

std::vector<std::string> amplitude_warnings(const TrigPotential& phi, long d) {
  std::vector<std::string> out;
  const double osc = phi.oscillation();
  if (osc > std::log(static_cast<double>(d))) {
    std::ostringstream os;
    os << "potential oscillation " << osc << " exceeds log d = " << std::log(static_cast<double>(d))
       << "; only the convergence diagnostics certify the fiber construction";
    out.push_back(os.str());
  }
  return out;
}

ConditionalFamily conditional_family(const TrigPotential& phi2, long d, const Shape<2>& shape,
                                     const FamilyConfig& cfg) {
  ConditionalFamily fam;
  fam.d = d;
  fam.phi = phi2;
  fam.shape = shape;
  fam.cfg = cfg;
  fam.warnings = amplitude_warnings(phi2, d);

  const TransferOperator<2> op = make_transfer<2>(phi2, d, shape);
  fam.eig = solve_eigendata<2>(op, cfg.solver());
  fam.mu = equilibrium_state<2>(fam.eig);

  auto [bp, nu] = base_potential_and_measures<2>(op, cfg);
  fam.duality_residual = fiber_duality_residual(op, bp.phi_base, nu);
  fam.Phi = std::move(bp);
  fam.nu_x = std::move(nu);

  const std::size_t nb = shape[0];
  const std::size_t nf = shape[1];
  const TransferOperator<1> base_op = make_transfer_fine<1>(fam.Phi.phi_fine, d, {nb});
  fam.base_eig = solve_eigendata<1>(base_op, cfg.solver());
  fam.mu_hat = equilibrium_state<1>(fam.base_eig);

  fam.mu_x = Field<2>(shape);
  double ratio_min = INFINITY;
  double ratio_max = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    std::span<double> row = fam.mu_x.row(i);
    kernels::hadamard(fam.eig.h.row(i), fam.nu_x.row(i), row);
    const double mass = std::accumulate(row.begin(), row.end(), 0.0);
    const double ratio = mass / fam.base_eig.h[i];
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
    kernels::scale(1.0 / mass, row);
    NodeWeights<1> w(Field<1>({nf}, std::vector<double>(row.begin(), row.end())));
    fam.mu_x_cells.push_back(w.cells());
    fam.c_x.push_back(NodeCdf::of(row));
  }
  fam.fiber_mass_spread = ratio_max / ratio_min - 1.0;

  double tv = 0.0;
  double w1 = 0.0;
  std::vector<double> diff(nf);
  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t j = (i + 1) % nb;
    double acc = 0.0;
    double cum = 0.0;
    for (std::size_t k = 0; k < nf; ++k) {
      const double dk = fam.mu_x.at({i, k}) - fam.mu_x.at({j, k});
      acc += std::abs(dk);
      cum += dk;
      diff[k] = cum;
    }
    tv = std::max(tv, 0.5 * acc);
    std::vector<double> sorted = diff;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(nf / 2), sorted.end());
    const double med = sorted[nf / 2];
    double dist = 0.0;
    for (double c : diff) dist += std::abs(c - med);
    w1 = std::max(w1, dist / static_cast<double>(nf));
  }
  fam.continuity_constant = tv * static_cast<double>(nb);
  fam.kantorovich_constant = w1 * static_cast<double>(nb);
  return fam;
}

double disintegration_integral(const ConditionalFamily& fam, const TestFunction& psi) {
  const std::size_t nb = fam.n_base();
  const std::size_t nf = fam.n_fiber();
  double acc = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < nf; ++j) {
      const double x[2] = {static_cast<double>(i) / static_cast<double>(nb),
                           static_cast<double>(j) / static_cast<double>(nf)};
      inner += fam.mu_x.at({i, j}) * psi(x);
    }
    acc += fam.mu_hat.nodes[i] * inner;
  }
  return acc;
}

double equilibrium_integral(const ConditionalFamily& fam, const TestFunction& psi) {
  const std::size_t nb = fam.n_base();
  const std::size_t nf = fam.n_fiber();
  double acc = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < nf; ++j) {
      const double x[2] = {static_cast<double>(i) / static_cast<double>(nb),
                           static_cast<double>(j) / static_cast<double>(nf)};
      acc += fam.mu.nodes[fam.mu.nodes.weights().flat({i, j})] * psi(x);
    }
  }
  return acc;
}

}  // namespace eqconj
