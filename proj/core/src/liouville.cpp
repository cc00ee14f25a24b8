#include "trapnet/liouville.hpp"

#include <algorithm>
#include <ostream>

#include "trapnet/config.hpp"
#include "trapnet/errors.hpp"
#include "trapnet/series.hpp"

namespace trapnet {
namespace {

DensityMatrix hermitian_part(const NetworkSpec& spec, const ComplexVector& vec, int sites) {
  const ComplexMatrix rho = unvectorize(vec, sites);
  return DensityMatrix(spec, 0.5 * (rho + rho.adjoint()));
}

}  // namespace

Liouvillian::Liouvillian(NetworkSpec spec, ComplexMatrix generator, double dephasing)
    : spec_(spec),
      generator_(std::move(generator)),
      dephasing_(dephasing),
      sites_(spec.total_sites()) {}

Liouvillian build_liouvillian(const Hamiltonian& hamiltonian, double dephasing) {
  if (!(dephasing >= 0.0)) throw InvalidSpec("dephasing rate must be non-negative");
  const ComplexMatrix& H = hamiltonian.matrix();
  const int n = hamiltonian.dim();
  const Complex minus_i(0.0, -1.0);
  ComplexMatrix generator = ComplexMatrix::Zero(n * n, n * n);

  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const int row = flat_index(x, y, n);
      for (int z = 0; z < n; ++z) {
        // (H rho)_xy = sum_z H_xz rho_zy ; (rho H^dagger)_xy = sum_z rho_xz conj(H_yz)
        if (H(x, z) != 0.0) generator(row, flat_index(z, y, n)) += minus_i * H(x, z);
        if (H(y, z) != 0.0) generator(row, flat_index(x, z, n)) -= minus_i * std::conj(H(y, z));
      }
      if (x != y) generator(row, row) -= dephasing;
    }
  }
  return Liouvillian(hamiltonian.spec(), std::move(generator), dephasing);
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  const int n = static_cast<int>(rho.rows());
  ComplexVector vec(n * n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) vec(flat_index(x, y, n)) = rho(x, y);
  }
  return vec;
}

ComplexMatrix unvectorize(const ComplexVector& vec, int sites) {
  if (vec.size() != static_cast<Eigen::Index>(sites) * sites) {
    throw InvalidSpec("vector length does not match sites^2");
  }
  ComplexMatrix rho(sites, sites);
  for (int x = 0; x < sites; ++x) {
    for (int y = 0; y < sites; ++y) rho(x, y) = vec(flat_index(x, y, sites));
  }
  return rho;
}

ComplexVector trace_functional(int sites) {
  ComplexVector f = ComplexVector::Zero(static_cast<Eigen::Index>(sites) * sites);
  for (int x = 0; x < sites; ++x) f(flat_index(x, x, sites)) = 1.0;
  return f;
}

Propagator diagonalize(const Liouvillian& liouvillian) {
  return diagonalize(liouvillian.generator());
}

std::vector<DensityMatrix> evolve(const Propagator& propagator, const DensityMatrix& rho0,
                                  std::span<const double> times) {
  const int n = rho0.dim();
  if (propagator.dim() != n * n) throw InvalidSpec("propagator does not match the state size");
  const ComplexVector coeffs = propagator.left() * vectorize(rho0.matrix());
  std::vector<DensityMatrix> states;
  states.reserve(times.size());
  for (const double t : times) {
    if (t < 0.0) throw InvalidSpec("evolution times must be non-negative");
    const ComplexVector decayed = (propagator.eigenvalues().array() * t).exp() * coeffs.array();
    states.push_back(hermitian_part(rho0.spec(), propagator.right() * decayed, n));
  }
  return states;
}

std::vector<DensityMatrix> integrate_master_equation(const Liouvillian& liouvillian,
                                                     const DensityMatrix& rho0,
                                                     std::span<const double> times, double rtol) {
  const auto vecs = integrate_linear(liouvillian.generator(), vectorize(rho0.matrix()), times, rtol);
  std::vector<DensityMatrix> states;
  states.reserve(vecs.size());
  for (const auto& v : vecs) states.push_back(hermitian_part(rho0.spec(), v, rho0.dim()));
  return states;
}

std::vector<DensityMatrix> propagate(const Liouvillian& liouvillian, const DensityMatrix& rho0,
                                     std::span<const double> times) {
  try {
    return evolve(diagonalize(liouvillian), rho0, times);
  } catch (const NearDefective&) {
    return integrate_master_equation(liouvillian, rho0, times);
  }
}

void write_spectrum_csv(std::ostream& out, const Propagator& propagator) {
  out << "k,re_lambda,im_lambda\n";
  for (int k = 0; k < propagator.dim(); ++k) {
    const Complex lambda = propagator.eigenvalues()(k);
    out << k << ',' << format_double(lambda.real()) << ',' << format_double(lambda.imag()) << '\n';
  }
}

}  // namespace trapnet
