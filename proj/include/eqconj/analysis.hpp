#pragma once

// Symbolic dynamics of E_d and the symmetry audit.

#include <cstdint>
#include <string>
#include <vector>

#include "eqconj/conjugacy.hpp"

namespace eqconj {

// A_k = [k/d, (k+1)/d), k = 0..d-1, left-closed.
class MarkovPartition {
 public:
  explicit MarkovPartition(long d);
  long degree() const noexcept { return d_; }
  const std::vector<double>& breakpoints() const noexcept { return breaks_; }
  int symbol(double x) const;
  // Cover with disjoint interiors, each interval mapped onto the circle by E_d.
  bool is_markov() const;

 private:
  long d_;
  std::vector<double> breaks_;
};

// omega_j = floor(d * x_j) along the float orbit x_{j+1} = d x_j mod 1.
std::vector<int> coding(double x, long d, std::size_t n_symbols);
// Same for x = p / q in exact integer arithmetic.
std::vector<int> coding_rational(std::int64_t p, std::int64_t q, long d, std::size_t n_symbols);

// x -> x + a or x -> -x + a on the circle.
struct CircleSymmetry {
  bool reversing = false;
  double a = 0.0;
  double operator()(double x) const { return wrap01(reversing ? a - x : x + a); }
  double inverse(double x) const { return wrap01(reversing ? a - x : x - a); }
  bool is_identity() const { return !reversing && a == 0.0; }
  std::string describe() const;
};

// sup over sample points of the torus distance between sigma(E_d x) and E_d(sigma x).
double commutation_defect(const CircleSymmetry& s, long d);

struct SymmetryAudit {
  long d = 2;
  std::size_t resolution = 0;
  double tol = 0.0;
  std::vector<CircleSymmetry> found;
  // {a : (d - 1) a in Z} per orientation class.
  std::vector<CircleSymmetry> algebraic;
  bool agrees = false;
  double max_defect = 0.0;
  std::size_t claimed_count = 0;
  std::string diagnostic;
};

// Scans a = i / resolution in each orientation class, refines every local
// minimum of the defect by golden section and keeps those with defect <= tol.
// Only rotations and reflected rotations are searched.
SymmetryAudit enumerate_symmetries(long d, std::size_t resolution = 4096, double tol = 1e-10);

struct OrbitCandidate {
  CircleSymmetry base;
  CircleSymmetry fiber;
  // sup over grid nodes of the torus distance between F(H'(z)) and H'(E_d z), H' = H o sigma.
  double conjugacy_error = 0.0;
  // max over the trig suite of |int psi o H' dmu - int psi dm^2|.
  double transport_error = 0.0;
  bool transports_mu = false;
  std::string label;
};

// Candidates H o (sigma_base x sigma_fiber) for all pairs of symmetries; F is unchanged.
std::vector<OrbitCandidate> conjugacy_orbit(const ConditionalFamily& fam, const TorusConjugacy& H,
                                            const SkewProductMap& F, const std::vector<CircleSymmetry>& base,
                                            const std::vector<CircleSymmetry>& fiber, double transport_tol);

}  // namespace eqconj
