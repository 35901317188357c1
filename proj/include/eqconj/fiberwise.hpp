#pragma once

// Fiberwise transfer operators of E_d viewed as the skew product over the
// first coordinate: L_x psi(y) = sum_{ybar: d ybar = y} exp(phi(x, ybar)) psi(ybar),
// mapping functions on the fiber over x to functions on the fiber over d x.

#include <array>
#include <string>
#include <vector>

#include "eqconj/grid.hpp"
#include "eqconj/potential.hpp"
#include "eqconj/transfer.hpp"

namespace eqconj {

struct FamilyConfig {
  double tol = 1e-12;
  int max_iter = 1000;
  int fiber_k_max = 200;
  std::array<double, 2> probes{0.0, 1.0 / 3.0};

  SolverConfig solver() const { return {tol, max_iter}; }
};

// L_x on an n-point fiber grid for one frozen base coordinate x.
class FiberOperator {
 public:
  FiberOperator(const TrigPotential& phi2, double x, long d, std::size_t n_fiber);
  GridFunction1D apply(const GridFunction1D& psi) const { return op_.apply(psi); }
  GridFunction1D apply_adjoint(const GridFunction1D& nu) const { return op_.apply_adjoint(nu); }

 private:
  TransferOperator<1> op_;
};

GridFunction1D apply_fiber_operator(const TrigPotential& phi2, double x, long d, const GridFunction1D& psi);

// L_x^k = L_{d^{k-1} x} o ... o L_x.
GridFunction1D iterate_fiber_operator(const TrigPotential& phi2, double x, long d, int k,
                                      const GridFunction1D& psi);

struct BasePotential {
  // Phi at the base nodes and on the base preimage lattice {m / (d n)}.
  GridFunction1D phi_base;
  GridFunction1D phi_fine;
  int k_used = 0;
  double last_increment = 0.0;
  std::array<double, 2> y_probe{};
  // sup over base nodes of |Phi(probe 0) - Phi(probe 1)|.
  double probe_gap = 0.0;
};

// Result of the fiber recursion
//   nu_x^{k+1} = L_x^* nu_{dx}^k / Z_x^k,  Phi_k(x) = log Z_x^k,
// started from point evaluation at a probe. Field axis 0 is the base; the
// remaining axes are the fiber (rank 1 on T^2, rank 2 on T^3). Rows of nu are
// node weights summing to 1.
template <std::size_t D>
struct FiberSolution {
  GridFunction1D phi_nodes;
  GridFunction1D phi_fine;
  Field<D> nu;
  int k_used = 0;
  double last_increment = 0.0;
};

template <std::size_t D>
FiberSolution<D> fiber_recursion(const TransferOperator<D>& op, const FamilyConfig& cfg, double probe);

extern template FiberSolution<2> fiber_recursion<2>(const TransferOperator<2>&, const FamilyConfig&, double);
extern template FiberSolution<3> fiber_recursion<3>(const TransferOperator<3>&, const FamilyConfig&, double);

// Runs the recursion at both probes; nu comes from the first probe.
template <std::size_t D>
std::pair<BasePotential, Field<D>> base_potential_and_measures(const TransferOperator<D>& op,
                                                              const FamilyConfig& cfg);

BasePotential base_potential(const TrigPotential& phi2, long d, const Shape<2>& shape, const FamilyConfig& cfg);

struct ConditionalEigenmeasures {
  BasePotential phi;
  // Row i: node weights of nu_{x_i}.
  Field<2> nu;
  // max over base nodes and fiber test functions of
  // |nu_{dx}(L_x psi) - exp(Phi(x)) nu_x(psi)|.
  double duality_residual = 0.0;
};

ConditionalEigenmeasures conditional_eigenmeasures(const TrigPotential& phi2, long d, const Shape<2>& shape,
                                                   const FamilyConfig& cfg);

// Duality residual of a family against the operator (see above).
double fiber_duality_residual(const TransferOperator<2>& op, const GridFunction1D& phi_nodes, const Field<2>& nu);
// Worst fiber index for the same residual.
std::size_t fiber_duality_worst(const TransferOperator<2>& op, const GridFunction1D& phi_nodes, const Field<2>& nu);

struct ConditionalFamily {
  long d = 2;
  TrigPotential phi{2};
  Shape<2> shape{};
  FamilyConfig cfg;

  // Two-dimensional eigendata of phi and the equilibrium state mu = h nu.
  EigenData<2> eig;
  EquilibriumState<2> mu;

  BasePotential Phi;
  // Node weights of nu_x and mu_x = h(x, .) nu_x / hhat(x), one row per base node.
  Field<2> nu_x;
  Field<2> mu_x;
  std::vector<DiscreteMeasure> mu_x_cells;
  std::vector<NodeCdf> c_x;

  // Eigendata of Phi on the base and mu_hat = hhat nuhat.
  EigenData<1> base_eig;
  EquilibriumState<1> mu_hat;

  double duality_residual = 0.0;
  // n_base * max_i TV(mu_{x_i}, mu_{x_{i+1}}).
  double continuity_constant = 0.0;
  // n_base * max_i W1(mu_{x_i}, mu_{x_{i+1}}) on the circle.
  double kantorovich_constant = 0.0;
  // max/min - 1 of sum_y h(x, y) nu_x(y) / hhat(x) over base nodes.
  double fiber_mass_spread = 0.0;
  std::vector<std::string> warnings;

  std::size_t n_base() const { return shape[0]; }
  std::size_t n_fiber() const { return shape[1]; }
  double pressure_gap() const { return eig.pressure - base_eig.pressure; }
  // Phi interpolated from the preimage lattice.
  double Phi_at(double x) const { return Phi.phi_fine(x); }
};

ConditionalFamily conditional_family(const TrigPotential& phi2, long d, const Shape<2>& shape,
                                     const FamilyConfig& cfg);

// Integral of mu_x(psi(x, .)) d mu_hat(x) and of psi d mu, both by node quadrature.
double disintegration_integral(const ConditionalFamily& fam, const TestFunction& psi);
double equilibrium_integral(const ConditionalFamily& fam, const TestFunction& psi);

// Warns when sup phi - inf phi > log d.
std::vector<std::string> amplitude_warnings(const TrigPotential& phi, long d);

}  // namespace eqconj
