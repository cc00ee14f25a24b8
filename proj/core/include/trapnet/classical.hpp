#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "trapnet/network.hpp"
#include "trapnet/series.hpp"

namespace trapnet {

/// Strong-dephasing hopping rates of the directed chains.
struct ClassicalRates {
  double defect_bond = 0.0;  // kA = 2 J^2 gamma / (gamma^2 + Delta^2)
  double body_bond = 0.0;    // kB = 2 J^2 / gamma
  double trap_bond = 0.0;    // kC = 2 J^2 / (gamma + Gamma / 2)
};

/// Throws InvalidSpec unless dephasing > 0.
[[nodiscard]] ClassicalRates classical_rates(double hopping, double dephasing, double defect,
                                             double trap_rate);

/// Incoherent rate 2 J^2 g / (g^2 + dE^2) of a bond whose coherence decays at
/// rate g and whose site energies differ by dE.
[[nodiscard]] double incoherent_rate(double coupling, double decoherence, double mismatch);

/// Network a directed chain was derived from.
struct ChainOrigin {
  Topology kind = Topology::AsymmetricChain;
  int branches = 1;
  int sites = 0;  // N_S of the original network
  ClassicalRates rates;
};

/// Birth-death chain with a trap. Site 0 carries the trap (rate Gamma),
/// site M-1 is the far (defect) end where the walker starts.
class RateModel {
 public:
  /// `hop_away[i]` is the rate i -> i+1 (i < M-1); `hop_toward[i]` the rate
  /// i -> i-1 (i >= 1). Unused end entries must be zero.
  RateModel(std::vector<double> hop_away, std::vector<double> hop_toward, double trap_rate,
            ChainOrigin origin = {});

  [[nodiscard]] const Eigen::MatrixXd& matrix() const { return matrix_; }
  [[nodiscard]] int sites() const { return static_cast<int>(hop_away_.size()); }
  [[nodiscard]] const std::vector<double>& hop_away() const { return hop_away_; }
  [[nodiscard]] const std::vector<double>& hop_toward() const { return hop_toward_; }
  [[nodiscard]] double trap_rate() const { return trap_rate_; }
  [[nodiscard]] Eigen::VectorXd initial_population() const;

  [[nodiscard]] const ChainOrigin& origin() const { return origin_; }
  /// 1 for a chain origin, 0 for a star origin.
  [[nodiscard]] int delta_ch() const { return origin_.kind == Topology::AsymmetricChain ? 1 : 0; }

 private:
  std::vector<double> hop_away_;
  std::vector<double> hop_toward_;
  double trap_rate_;
  ChainOrigin origin_;
  Eigen::MatrixXd matrix_;
};

/// Effective directed chain of the star or the chain: kA on the defect
/// bond, kB on the body, and on the trap bond kC toward / N kC away from the
/// trap (star) or N kC both ways (chain). For L = 1 the single bond is both
/// trap and defect bond and uses the combined decoherence gamma + Gamma/2
/// with mismatch Delta.
[[nodiscard]] RateModel build_rate_model(const NetworkSpec& spec, double dephasing);

/// P(t) = exp(K t) P(0) through the symmetrized tridiagonal eigenproblem.
class RatePropagator {
 public:
  explicit RatePropagator(const RateModel& model);
  [[nodiscard]] Eigen::VectorXd populations(double t) const;
  [[nodiscard]] double surviving(double t) const;
  [[nodiscard]] const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::VectorXd scale_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd initial_modes_;
};

[[nodiscard]] ObservableSeries evolve_rates(const RateModel& model, std::span<const double> times,
                                            const NetworkSpec& spec, double dephasing);

struct MfptClosedForm {
  double mean = 0.0;             // tau_bar
  double absorption_time = 0.0;  // ln 2 * tau_bar
};

/// tau_bar = N_S/Gamma + 1/kA + (L+1)(L-2)/(2 kB) + (L/kC)(1 + delta_ch (1-N)/N),
/// with N_S the size of the original network. Requires L >= 2, gamma > 0.
[[nodiscard]] MfptClosedForm mfpt_closed_form(const NetworkSpec& spec, double dephasing);

struct MfptInverse {
  double linear_solve = 0.0;        // -sum_s [K^{-1} P(0)]_s
  double recurrence = 0.0;          // sum r_m + sum 1/(r_m k_m^right) sum_{n>m} r_n
  std::vector<double> amplitudes;   // r_m, m = 1..M
};

/// Throws SingularRateMatrix when Gamma = 0.
[[nodiscard]] MfptInverse mfpt_via_inverse(const RateModel& model);

/// Waiting-time distributions of the chain augmented with an absorbing
/// virtual site (index 0) fed by the trap at rate Gamma. Chain site i of the
/// model is index i + 1 here.
class LaplaceWTD {
 public:
  explicit LaplaceWTD(const RateModel& model);

  [[nodiscard]] const Eigen::MatrixXd& augmented_matrix() const { return augmented_; }
  [[nodiscard]] int size() const { return static_cast<int>(augmented_.rows()); }

  /// Q_ij(z) = K~_ij / (z + kappa_j) for i != j, kappa_j the exit rate of j.
  [[nodiscard]] Eigen::MatrixXd waiting_time_matrix(double z) const;
  [[nodiscard]] Eigen::MatrixXd waiting_time_derivative(double z) const;

  /// phi_i(z): Laplace transform of the first-passage density from site i to
  /// the virtual site; phi_0 = 1. Throws RecursionNonConvergent if singular.
  [[nodiscard]] Eigen::VectorXd first_passage(double z) const;
  [[nodiscard]] Eigen::VectorXd first_passage_derivative(double z) const;

 private:
  Eigen::MatrixXd augmented_;
  Eigen::VectorXd exit_rates_;
};

struct MfptWtd {
  double finite_difference = 0.0;  // five-point central difference of -phi_M at 0
  double exact = 0.0;              // -phi'_{M}(0) from the differentiated recursion
  double phi_at_zero = 0.0;
  double step = 0.0;
};

[[nodiscard]] MfptWtd mfpt_via_wtd(const RateModel& model);

}  // namespace trapnet
