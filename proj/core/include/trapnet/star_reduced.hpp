#pragma once

#include <span>

#include "trapnet/network.hpp"
#include "trapnet/series.hpp"
#include "trapnet/spectral.hpp"

namespace trapnet {

/// Index map of the symmetry-reduced star variables, n_S = 1 + 2L + 2L^2:
/// the core population P0, the intra-branch block P (L x L), the
/// inter-branch block C (L x L), the core-branch coherences K and their
/// conjugates K*. Positions s, s' are 1-based.
class ReducedLayout {
 public:
  explicit ReducedLayout(int length);

  [[nodiscard]] int length() const { return length_; }
  [[nodiscard]] int size() const { return 1 + 2 * length_ + 2 * length_ * length_; }

  [[nodiscard]] int core() const { return 0; }
  [[nodiscard]] int intra(int s, int t) const { return 1 + (s - 1) * length_ + (t - 1); }
  [[nodiscard]] int inter(int s, int t) const {
    return 1 + length_ * length_ + (s - 1) * length_ + (t - 1);
  }
  [[nodiscard]] int core_branch(int s) const { return 1 + 2 * length_ * length_ + (s - 1); }
  [[nodiscard]] int core_branch_conj(int s) const {
    return 1 + 2 * length_ * length_ + length_ + (s - 1);
  }

  /// Row functional returning P0 + sum_s P_ss, the surviving population.
  [[nodiscard]] ComplexVector population_functional() const;

 private:
  int length_;
};

/// Symmetry-reduced state of the star:
///   P0 = rho_{00,00},  P_ss' = sum_b rho_{bs,bs'},
///   C_ss' = sum_{b != b'} rho_{bs,b's'},  K_s = sum_b rho_{bs,00}.
struct ReducedState {
  Complex core = 0.0;
  ComplexMatrix intra;
  ComplexMatrix inter;
  ComplexVector core_branch;
  ComplexVector core_branch_conj;

  [[nodiscard]] ComplexVector to_vector() const;
  [[nodiscard]] static ReducedState from_vector(const ComplexVector& v, int length);
  /// P0 + sum_s P_ss
  [[nodiscard]] double population() const;
};

/// Projects a full star density matrix onto the reduced variables.
[[nodiscard]] ReducedState reduce(const DensityMatrix& rho);

/// Image of the uniform peripheral pure state: P_LL = 1, C_LL = N - 1.
[[nodiscard]] ReducedState initial_reduced_state(const NetworkSpec& star);

/// Linear generator G of the reduced equations, with the reduced branch
/// Hamiltonian h (tridiagonal, hopping J, Delta in the corner).
class ReducedGenerator {
 public:
  ReducedGenerator(NetworkSpec spec, double dephasing, ComplexMatrix generator,
                   Eigen::MatrixXd branch_hamiltonian);

  [[nodiscard]] const ComplexMatrix& matrix() const { return generator_; }
  [[nodiscard]] const Eigen::MatrixXd& branch_hamiltonian() const { return branch_; }
  [[nodiscard]] const NetworkSpec& spec() const { return spec_; }
  [[nodiscard]] double dephasing() const { return dephasing_; }
  [[nodiscard]] ReducedLayout layout() const { return ReducedLayout(spec_.length); }
  [[nodiscard]] int dim() const { return static_cast<int>(generator_.rows()); }

 private:
  NetworkSpec spec_;
  double dephasing_;
  ComplexMatrix generator_;
  Eigen::MatrixXd branch_;
};

[[nodiscard]] ReducedGenerator build_reduced_generator(const NetworkSpec& star, double dephasing);

/// P_A(t) = 1 - P0(t) - sum_s P_ss(t) from v(t) = exp(G t) v(0), starting from
/// initial_reduced_state. Falls back to direct integration when G is
/// near-defective.
[[nodiscard]] ObservableSeries evolve_reduced(const ReducedGenerator& generator,
                                              std::span<const double> times);

/// Full reduced trajectories v(t) (spectral route only; propagates NearDefective).
[[nodiscard]] std::vector<ReducedState> evolve_reduced_states(const ReducedGenerator& generator,
                                                              const ReducedState& initial,
                                                              std::span<const double> times);

}  // namespace trapnet
