#pragma once

// Ruelle-Perron-Frobenius operators of E_d on T^D by collocation:
//   (L psi)(x) = sum over preimages xbar of exp(phi(xbar)) * psi(xbar),
// with psi interpolated piecewise-linearly at the preimage lattice
// {m / (d n)} and exp(phi) stored on that lattice.

#include <array>
#include <cstddef>

#include "eqconj/grid.hpp"
#include "eqconj/potential.hpp"
#include "eqconj/stencil.hpp"

namespace eqconj {

template <std::size_t D>
class TransferOperator {
 public:
  // weights: exp(phi) on the preimage lattice, shape d * shape.
  TransferOperator(long d, const Shape<D>& shape, Field<D> weights);

  long degree() const noexcept { return d_; }
  const Shape<D>& shape() const noexcept { return shape_; }
  Shape<D> fine_shape() const noexcept { return weights_.shape(); }
  const Field<D>& weights() const noexcept { return weights_; }

  Field<D> apply(const Field<D>& psi) const;
  // Transpose with respect to the nodal pairing sum_i nu_i psi_i.
  Field<D> apply_adjoint(const Field<D>& nu) const;
  // psi interpolated onto the preimage lattice.
  Field<D> prolong(const Field<D>& psi) const;

 private:
  long d_;
  Shape<D> shape_;
  Field<D> weights_;
  std::array<AxisStencil, D> prolong_;
  std::array<AxisStencil, D> restrict_;
  std::array<AxisStencil, D> fold_;
  std::array<AxisStencil, D> tile_;
};

extern template class TransferOperator<1>;
extern template class TransferOperator<2>;
extern template class TransferOperator<3>;

// phi evaluated exactly at the preimage lattice.
template <std::size_t D>
TransferOperator<D> make_transfer(const TrigPotential& phi, long d, const Shape<D>& shape);

// phi given by grid samples, interpolated at the preimages.
template <std::size_t D>
TransferOperator<D> make_transfer(const Field<D>& phi, long d);

// phi given on the preimage lattice itself.
template <std::size_t D>
TransferOperator<D> make_transfer_fine(const Field<D>& phi_fine, long d, const Shape<D>& shape);

GridFunction1D apply_transfer_1d(const GridFunction1D& phi, long d, const GridFunction1D& psi);
GridFunction2D apply_transfer_2d(const GridFunction2D& phi, long d, const GridFunction2D& psi);

struct SolverConfig {
  double tol = 1e-12;
  int max_iter = 1000;
};

template <std::size_t D>
struct EigenData {
  double lambda = 0.0;
  double pressure = 0.0;
  // sup |L h - lambda h| / sup h after the final step.
  double residual = 0.0;
  int iterations = 0;
  int adjoint_iterations = 0;
  Field<D> h;
  // Eigenmeasure as node masses (exact duality with the operator) and as
  // piecewise-uniform cell weights.
  NodeWeights<D> nu_nodes;
  CellMeasure<D> nu;
};

// Power iteration from psi = 1 for h and from uniform weights for nu;
// normalized so that sum_i h_i nu_i = 1.
template <std::size_t D>
EigenData<D> solve_eigendata(const TransferOperator<D>& op, const SolverConfig& cfg);

template <std::size_t D>
EigenData<D> solve_eigendata(const TrigPotential& phi, long d, const Shape<D>& shape,
                             const SolverConfig& cfg) {
  return solve_eigendata<D>(make_transfer<D>(phi, d, shape), cfg);
}

template <std::size_t D>
struct NormalizedPotential {
  // phi~ = phi + log h - log h o E_d - log lambda on the preimage lattice.
  Field<D> fine;
  // phi~ at the grid nodes.
  Field<D> nodes;
  // sup |L_{phi~} 1 - 1|.
  double branch_sum_error = 0.0;
};

template <std::size_t D>
NormalizedPotential<D> normalize_potential(const TransferOperator<D>& op, const EigenData<D>& eig);

template <std::size_t D>
struct EquilibriumState {
  NodeWeights<D> nodes;
  CellMeasure<D> cells;
};

template <std::size_t D>
EquilibriumState<D> equilibrium_state(const EigenData<D>& eig);

// Ulam-Galerkin oracle on n cells: entries are integrals of exp(phi) over
// cell_i intersected with a branch preimage of cell_j (8-point Gauss-Legendre).
struct UlamResult {
  double lambda = 0.0;
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  int iterations = 0;
};
UlamResult ulam_oracle(const TrigPotential& phi, long d, std::size_t n, const SolverConfig& cfg = {});

// (1/n) log sum over the d^n - 1 fixed points k/(d^n - 1) of exp(S_n phi).
double periodic_orbit_pressure(const TrigPotential& phi, long d, int n_period);

}  // namespace eqconj
