#pragma once

// Consolidated checks of a built conjugacy.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eqconj/conjugacy.hpp"
#include "eqconj/tolerances.hpp"

namespace eqconj {

struct CheckResult {
  std::string name;
  // What the check asserts, in words.
  std::string anchor;
  double error = 0.0;
  std::optional<double> median;
  double tolerance = 0.0;
  // Pass means error <= tolerance, or error >= tolerance for ratio checks.
  bool lower_bound = false;
  bool pass = false;
  std::vector<std::size_t> grid;
  double runtime_s = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;

  bool all_pass() const;
  const CheckResult* first_failure() const;
  const CheckResult* find(const std::string& name) const;
};

struct Pipeline {
  ConditionalFamily fam;
  TorusConjugacy H;
  SkewProductMap F;
};

Pipeline build_pipeline(const TrigPotential& phi, long d, const Shape<2>& shape, const FamilyConfig& cfg);

struct DerivativeStats {
  double f_median = 0.0;
  double g_median = 0.0;
  double det_median = 0.0;
  double f_min = 0.0;
  double g_min = 0.0;
  // sup of |f' g' / exp(-phi~ o H^{-1}) - 1| over the grid.
  double jacobian_identity = 0.0;
};

// One-cell central differences of F against the closed-form fields.
DerivativeStats derivative_stats(const Pipeline& p);

VerificationReport run_verification(const Pipeline& p);

// Runs at n and 2n and appends refinement-ratio checks.
VerificationReport run_two_grid(const TrigPotential& phi, long d, const Shape<2>& shape, const FamilyConfig& cfg);

}  // namespace eqconj
