#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "eqconj/potential.hpp"

namespace eqconj::testing {

// Fixed-seed generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  std::vector<double> vec(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

  // Low-frequency trig polynomial with sup|phi| <= max_amp.
  TrigPotential potential(std::size_t dim, int terms, double max_amp) {
    std::vector<TrigTerm> t;
    for (int i = 0; i < terms; ++i) {
      std::vector<long> f(dim);
      do {
        for (long& k : f) k = integer(-2, 2);
      } while (std::all_of(f.begin(), f.end(), [](long k) { return k == 0; }));
      t.push_back({uniform(-1.0, 1.0) * max_amp / terms, f, uniform(0.0, 6.283185307179586)});
    }
    return TrigPotential(dim, t);
  }

 private:
  std::mt19937_64 rng_;
};

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace eqconj::testing
