#pragma once

// Trigonometric-polynomial potentials phi(x) = sum amp * cos(2 pi freq.x + phase).

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "eqconj/grid.hpp"

namespace eqconj {

struct TrigTerm {
  double amplitude = 0.0;
  std::vector<long> freq;
  double phase = 0.0;

  static TrigTerm cosine(double amp, std::vector<long> freq) { return {amp, std::move(freq), 0.0}; }
  static TrigTerm sine(double amp, std::vector<long> freq);
  static TrigTerm constant(double c, std::size_t dim) { return {c, std::vector<long>(dim, 0), 0.0}; }
};

class TrigPotential {
 public:
  explicit TrigPotential(std::size_t dim, std::vector<TrigTerm> terms = {});

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<TrigTerm>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  double operator()(std::span<const double> x) const;
  double operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }
  double operator()(double x, double y) const {
    const double v[2] = {x, y};
    return (*this)(std::span<const double>(v, 2));
  }
  double operator()(double x, double y, double z) const {
    const double v[3] = {x, y, z};
    return (*this)(std::span<const double>(v, 3));
  }

  // Values on the lattice prod_a {m / N_a}.
  template <std::size_t D>
  Field<D> sample(const Shape<D>& lattice) const;

  TrigPotential sum(const TrigPotential& other) const;
  // psi(x) -> psi(d x), i.e. all frequencies multiplied by d.
  TrigPotential compose_times(long d) const;
  TrigPotential scaled(double s) const;

  // Sup minus inf over a sampling lattice of the given per-axis size.
  double oscillation(std::size_t per_axis = 256) const;

  std::string describe() const;

 private:
  std::size_t dim_;
  std::vector<TrigTerm> terms_;
};

extern template Field<1> TrigPotential::sample<1>(const Shape<1>&) const;
extern template Field<2> TrigPotential::sample<2>(const Shape<2>&) const;
extern template Field<3> TrigPotential::sample<3>(const Shape<3>&) const;

// Fixed trigonometric test suites used by the verification checks.
struct TestFunction {
  std::string name;
  std::vector<long> freq;
  bool is_sine;
  double operator()(std::span<const double> x) const;
};

// cos/sin of 2 pi (k.x) for k in (1,0),(0,1),(1,1),(1,-1),(2,0),(0,2),(2,1),(1,2).
std::vector<TestFunction> torus_test_suite();
// cos/sin of 2 pi k y for k = 1..4.
std::vector<TestFunction> fiber_test_suite();
// cos/sin of 2 pi (k.x) for k in (1,0,0),(0,1,0),(0,0,1),(1,1,1).
std::vector<TestFunction> t3_test_suite();

}  // namespace eqconj
