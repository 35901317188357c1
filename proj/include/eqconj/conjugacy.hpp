#pragma once

// The measure-transporting conjugacy H(x, y) = (chat(x), c_x(y)) built from
// CDFs, the skew product F = H o E_d o H^{-1} and its derivative fields.
//
// Convention: every stored map is a node CDF, pushing its measure to Lebesgue.
// Fiber maps are indexed by the original base coordinate x; off-grid x
// blends the two neighbouring fibers linearly.

#include <array>
#include <vector>

#include "eqconj/fiberwise.hpp"
#include "eqconj/grid.hpp"

namespace eqconj {

struct TorusConjugacy {
  NodeCdf base;
  std::vector<NodeCdf> fibers;

  std::size_t n_base() const { return base.size(); }
  std::size_t n_fiber() const { return fibers.front().size(); }
  NodeCdf fiber_at(double x) const;
  double fiber_value(double x, double y) const;
  // Lifts of both coordinates.
  std::array<double, 2> operator()(double x, double y) const;
  std::array<double, 2> inverse(double u, double v) const;
};

TorusConjugacy build_conjugacy(const ConditionalFamily& fam);

// Samples on the uniform n_out grid of the piecewise-linear lift through the
// anchors (src(t_k), dst(d t_k)), t_k = (k + 1/2) / n, i.e. dst o (x d) o src^{-1}
// with exact secant slopes between consecutive anchors.
MonotoneCircleMap conjugate_expansion(const NodeCdf& src, const NodeCdf& dst, long d,
                                      std::size_t n_out);

struct SkewProductMap {
  long d = 2;
  // Lift of f on the u grid and lifts of g_{u_j} on the v grid, all of degree d.
  MonotoneCircleMap f;
  std::vector<MonotoneCircleMap> g;
  // Closed-form derivative fields at the grid nodes.
  GridFunction1D f_prime;
  GridFunction2D g_prime;

  std::size_t n_base() const { return f.size(); }
  std::size_t n_fiber() const { return g.front().size(); }
  double f_value(double u) const { return f(u); }
  // g_u(v), linear in u between grid rows.
  double g_value(double u, double v) const;
  std::array<double, 2> operator()(double u, double v) const { return {f(u), g_value(u, v)}; }
};

// Samples F = H o E_d o H^{-1} on the grid of H. Derivative fields are left empty.
SkewProductMap build_skew_product(const TorusConjugacy& H, long d);

// Closed forms evaluated through H^{-1}.
class DerivativeModel {
 public:
  DerivativeModel(const ConditionalFamily& fam, const TorusConjugacy& H) : fam_(fam), H_(H) {}

  // Phi~ = Phi + log hhat - log hhat o E_d - P(Phi).
  double Phi_tilde(double x) const;
  // phi~_x(y) = phi + log h_x(x, y) - log h_x(dx, dy) - Phi(x), h_x = h / hhat.
  double phi_tilde_fiber(double x, double y) const;
  // phi~ = phi + log h - log h o E_d - P(phi).
  double phi_tilde(double x, double y) const;

  double base_derivative(double u) const;
  double fiber_derivative(double u, double v) const;
  // exp(-phi~(H^{-1}(u, v))).
  double jacobian_target(double u, double v) const;

 private:
  const ConditionalFamily& fam_;
  const TorusConjugacy& H_;
};

GridFunction1D base_derivative_field(const ConditionalFamily& fam, const TorusConjugacy& H);
GridFunction2D fiber_derivative_field(const ConditionalFamily& fam, const TorusConjugacy& H);
// f'(u) g'_u(v) on the grid.
GridFunction2D jacobian_field(const ConditionalFamily& fam, const TorusConjugacy& H);

// build_skew_product plus derivative fields.
SkewProductMap assemble_skew_product(const ConditionalFamily& fam, const TorusConjugacy& H);

struct ConjugacyError {
  double sup = 0.0;
  std::size_t worst_base = 0;
  std::size_t worst_fiber = 0;
};

// sup over grid nodes z of torus distance between F(H(z)) and H(E_d z).
ConjugacyError conjugacy_identity_error(const TorusConjugacy& H, const SkewProductMap& F);

// Pushforward of the equilibrium state: each node mass of mu is spread
// uniformly over the H-image of its dual cell, then integrated in closed form.
double pushforward_integral(const ConditionalFamily& fam, const TorusConjugacy& H, const TestFunction& psi);
// Same, composing H with a product symmetry sigma before pushing forward.
double pushforward_integral(const ConditionalFamily& fam, const TorusConjugacy& H, const TestFunction& psi,
                            const std::function<std::array<double, 2>(double, double)>& sigma);

// Per-fiber transport: max over the fiber suite of |int psi o c_{x_i} d mu_{x_i} - int psi dm|.
std::vector<double> fiber_transport_errors(const ConditionalFamily& fam, const TorusConjugacy& H);

// int psi o F dm^2 by midpoint quadrature on the (u, v) grid.
double lebesgue_pullback_integral(const SkewProductMap& F, const TestFunction& psi);

// Average of exp(2 pi i k.x) over a box, closed form; returns the cos or sin part.
double box_average(const TestFunction& psi, std::span<const double> lo, std::span<const double> hi);
double box_average(const TestFunction& psi, const std::array<double, 2>& lo, const std::array<double, 2>& hi);

}  // namespace eqconj
