#pragma once

// Recursive construction on T^3: the base circle carries Phi from the fiber
// recursion, each T^2 fiber is straightened by a Knothe-Rosenblatt map
// (marginal CDF in y, conditional CDF in z).

#include <array>
#include <vector>

#include "eqconj/fiberwise.hpp"
#include "eqconj/grid.hpp"
#include "eqconj/potential.hpp"
#include "eqconj/transfer.hpp"

namespace eqconj {

inline constexpr std::size_t kT3MaxBase = 64;
inline constexpr std::size_t kT3MaxFiber = 64;

struct T3Conjugacy {
  long d = 2;
  Shape<3> shape{};
  EigenData<3> eig;
  EquilibriumState<3> mu;
  BasePotential Phi;
  EigenData<1> base_eig;
  EquilibriumState<1> mu_hat;

  NodeCdf base;
  // c^Y_{x_i}, one per base node.
  std::vector<NodeCdf> fiber_y;
  // c^Z_{x_i, y_j}, flat index i * n_y + j.
  std::vector<NodeCdf> fiber_z;
  // Node weights of mu_x on each T^2 fiber, rows = base nodes.
  Field<3> mu_x;

  double pressure_gap() const { return eig.pressure - base_eig.pressure; }
  double y_value(double x, double y) const;
  double z_value(double x, double y, double z) const;
  std::array<double, 3> operator()(double x, double y, double z) const;
  std::array<double, 3> inverse(double u, double v, double w) const;
};

T3Conjugacy t3_conjugacy(const TrigPotential& phi3, long d, const Shape<3>& shape, const FamilyConfig& cfg);

// F = H o E_d o H^{-1}, each coordinate piecewise linear through dual-cell anchors.
struct T3SkewProduct {
  long d = 2;
  T3Conjugacy H;
  MonotoneCircleMap f;
  std::vector<MonotoneCircleMap> gy;
  std::vector<MonotoneCircleMap> gz;

  std::array<double, 3> operator()(double u, double v, double w) const;
};

T3SkewProduct t3_skew_product(const T3Conjugacy& H);

struct T3Checks {
  // sup over grid nodes of the torus distance between F(H(z)) and H(E_d z).
  double conjugacy_error = 0.0;
  // max over the T^3 suite of |int psi o H dmu - int psi dm^3|.
  double pushforward_error = 0.0;
  double pressure_gap = 0.0;
};

T3Checks t3_checks(const T3SkewProduct& F);

// sup over nodes of |chat - c_1|, |c^Y - c_2|, |c^Z - c_3| where c_k is the node
// CDF of the 1D equilibrium state of the k-th separable part.
double t3_separable_deviation(const T3Conjugacy& H, const std::array<TrigPotential, 3>& parts,
                              const FamilyConfig& cfg);

// sup over nodes of the distance of H from the identity in each coordinate.
double t3_identity_deviation(const T3Conjugacy& H);

}  // namespace eqconj
