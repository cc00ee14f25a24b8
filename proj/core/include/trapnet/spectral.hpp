#pragma once

#include <span>
#include <vector>

#include "trapnet/network.hpp"

namespace trapnet {

/// A scalar observable <f| exp(G t) |v0> written as sum_k a_k exp(lambda_k t).
class ModeExpansion {
 public:
  ModeExpansion(ComplexVector rates, ComplexVector amplitudes);

  [[nodiscard]] Complex operator()(double t) const;
  [[nodiscard]] const ComplexVector& rates() const { return rates_; }
  [[nodiscard]] const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  ComplexVector rates_;
  ComplexVector amplitudes_;
};

/// Spectral form of exp(G t) for a diagonalizable generator G:
///   exp(G t) = sum_k exp(lambda_k t) |R_k><L_k| / <L_k|R_k>.
/// Left eigenvectors are stored as the rows of left(), already scaled so
/// that <L_k|R_k> = 1.
class Propagator {
 public:
  Propagator(ComplexVector eigenvalues, ComplexMatrix right, ComplexMatrix left);

  [[nodiscard]] const ComplexVector& eigenvalues() const { return eigenvalues_; }
  [[nodiscard]] const ComplexMatrix& right() const { return right_; }
  [[nodiscard]] const ComplexMatrix& left() const { return left_; }
  [[nodiscard]] int dim() const { return static_cast<int>(eigenvalues_.size()); }

  /// exp(G t) v0
  [[nodiscard]] ComplexVector apply(const ComplexVector& v0, double t) const;
  [[nodiscard]] ComplexMatrix evolution_operator(double t) const;
  /// <functional| exp(G t) |v0> as a reusable mode sum.
  [[nodiscard]] ModeExpansion expand(const ComplexVector& functional,
                                     const ComplexVector& v0) const;
  /// max_k ||L_k|| ||R_k|| / |<L_k|R_k>|, the worst eigenvalue condition number.
  [[nodiscard]] double max_condition() const;

 private:
  ComplexVector eigenvalues_;
  ComplexMatrix right_;
  ComplexMatrix left_;
};

/// Pairs whose overlap falls below this fraction of ||L|| ||R|| are treated
/// as defective.
inline constexpr double kDefectiveOverlap = 1e-10;

/// Full left/right eigendecomposition. Throws NearDefective when any mode is
/// ill-conditioned beyond kDefectiveOverlap or the eigensolver fails.
[[nodiscard]] Propagator diagonalize(const ComplexMatrix& generator);

/// Adaptive Dormand-Prince (4/5) integration of dv/dt = G v, sampled at the
/// ascending `times`.
[[nodiscard]] std::vector<ComplexVector> integrate_linear(const ComplexMatrix& generator,
                                                          const ComplexVector& v0,
                                                          std::span<const double> times,
                                                          double rtol = 1e-9,
                                                          double atol = 1e-13);

}  // namespace trapnet
