#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trapnet/network.hpp"

namespace trapnet {

struct InvariantDraw {
  NetworkSpec spec;
  double dephasing = 0.0;
};

struct DrawLimits {
  int min_branches = 2;
  int max_branches = 5;
  int min_length = 1;
  int max_length = 4;
  int max_sites = 17;
  double max_defect = 4.0;      // units of J
  double min_trap = 0.05;
  double max_trap = 1.0;
  double max_dephasing = 1.0;
};

/// Reproducible random parameter points of both topologies (J = 1).
[[nodiscard]] std::vector<InvariantDraw> random_draws(int count, std::uint64_t seed,
                                                      const DrawLimits& limits = {});

struct InvariantTolerances {
  double monotonicity = 1e-8;
  double hermiticity = 1e-10;
  double positivity = 1e-8;
  double spectrum = 1e-10;
  double conjugate_pair = 1e-8;  // relative to max(1, |lambda|)
};

struct InvariantCheck {
  std::string name;
  long checks = 0;
  long violations = 0;
  double worst = 0.0;  // largest observed excess over the ideal value
  std::string first_failure;

  [[nodiscard]] bool passed() const { return violations == 0; }
};

/// Names: trace_monotone, absorbed_monotone, hermiticity, positivity,
/// spectrum_real_part, conjugate_pairs.
struct InvariantReport {
  std::vector<InvariantCheck> checks;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] long violations() const;
};

/// Evolves the full density matrix of each draw over `points` times up to
/// 5 N_S / Gamma and checks every invariant along the way.
[[nodiscard]] InvariantReport run_invariant_suite(const std::vector<InvariantDraw>& draws,
                                                  int points = 120,
                                                  const InvariantTolerances& tolerances = {});

}  // namespace trapnet
