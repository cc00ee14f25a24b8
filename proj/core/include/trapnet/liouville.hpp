#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "trapnet/network.hpp"
#include "trapnet/spectral.hpp"

namespace trapnet {

/// Generator of the pure-dephasing master equation
///   d rho_xy / dt = -i (H rho - rho H^dagger)_xy - gamma (1 - delta_xy) rho_xy
/// acting on the row-major vectorization |rho>> (entry x*N_S + y holds rho_xy).
class Liouvillian {
 public:
  Liouvillian(NetworkSpec spec, ComplexMatrix generator, double dephasing);

  [[nodiscard]] const ComplexMatrix& generator() const { return generator_; }
  [[nodiscard]] double dephasing() const { return dephasing_; }
  [[nodiscard]] const NetworkSpec& spec() const { return spec_; }
  [[nodiscard]] int sites() const { return sites_; }
  [[nodiscard]] int dim() const { return static_cast<int>(generator_.rows()); }

 private:
  NetworkSpec spec_;
  ComplexMatrix generator_;
  double dephasing_;
  int sites_;
};

[[nodiscard]] Liouvillian build_liouvillian(const Hamiltonian& hamiltonian, double dephasing);

[[nodiscard]] inline int flat_index(int x, int y, int sites) { return x * sites + y; }
[[nodiscard]] ComplexVector vectorize(const ComplexMatrix& rho);
[[nodiscard]] ComplexMatrix unvectorize(const ComplexVector& vec, int sites);
/// Row functional with <<trace|rho>> = Tr rho.
[[nodiscard]] ComplexVector trace_functional(int sites);

[[nodiscard]] Propagator diagonalize(const Liouvillian& liouvillian);

/// rho(t) for every requested time, re-symmetrized as (rho + rho^dagger)/2.
[[nodiscard]] std::vector<DensityMatrix> evolve(const Propagator& propagator,
                                                const DensityMatrix& rho0,
                                                std::span<const double> times);

/// Direct adaptive time stepping of the master equation (relative tolerance
/// `rtol`), used when the spectral route is near-defective.
[[nodiscard]] std::vector<DensityMatrix> integrate_master_equation(
    const Liouvillian& liouvillian, const DensityMatrix& rho0, std::span<const double> times,
    double rtol = 1e-9);

/// Spectral evolution, falling back to integrate_master_equation when the
/// generator is near-defective.
[[nodiscard]] std::vector<DensityMatrix> propagate(const Liouvillian& liouvillian,
                                                   const DensityMatrix& rho0,
                                                   std::span<const double> times);

/// CSV with header `k,re_lambda,im_lambda`.
void write_spectrum_csv(std::ostream& out, const Propagator& propagator);

}  // namespace trapnet
