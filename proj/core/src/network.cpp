#include "trapnet/network.hpp"

#include <cmath>
#include <string>

#include "trapnet/errors.hpp"

namespace trapnet {

std::string_view to_string(Topology kind) {
  switch (kind) {
    case Topology::ExtendedStar:
      return "star";
    case Topology::AsymmetricChain:
      return "chain";
  }
  return "unknown";
}

Topology parse_topology(std::string_view text) {
  if (text == "star" || text == "extended_star" || text == "ExtendedStar") {
    return Topology::ExtendedStar;
  }
  if (text == "chain" || text == "asymmetric_chain" || text == "AsymmetricChain") {
    return Topology::AsymmetricChain;
  }
  throw InvalidSpec("unknown network kind '" + std::string(text) + "'");
}

int NetworkSpec::total_sites() const {
  return kind == Topology::ExtendedStar ? 1 + branches * length : 1 + length;
}

void NetworkSpec::validate() const {
  if (branches < 1) throw InvalidSpec("number of branches N must be >= 1");
  if (length < 1) throw InvalidSpec("branch length L must be >= 1");
  if (!(hopping > 0.0) || !std::isfinite(hopping)) {
    throw InvalidSpec("hopping J must be positive and finite");
  }
  if (!(trap_rate >= 0.0) || !std::isfinite(trap_rate)) {
    throw InvalidSpec("trap rate Gamma must be non-negative and finite");
  }
  if (!std::isfinite(defect) || !std::isfinite(site_energy)) {
    throw InvalidSpec("defect and site energy must be finite");
  }
}

NetworkSpec NetworkSpec::with_defect(double delta) const {
  NetworkSpec copy = *this;
  copy.defect = delta;
  return copy;
}

int star_site(int branch, int position, int length) {
  if (branch == 0 && position == 0) return 0;
  return 1 + (branch - 1) * length + (position - 1);
}

std::pair<int, int> star_site_of(int flat, int length) {
  if (flat == 0) return {0, 0};
  const int offset = flat - 1;
  return {1 + offset / length, 1 + offset % length};
}

Hamiltonian::Hamiltonian(NetworkSpec spec, ComplexMatrix matrix)
    : spec_(spec), matrix_(std::move(matrix)) {}

Hamiltonian build_hamiltonian(const NetworkSpec& spec) {
  spec.validate();
  const int n = spec.total_sites();
  const int L = spec.length;
  const double J = spec.hopping;
  ComplexMatrix H = ComplexMatrix::Zero(n, n);
  H(0, 0) = Complex(spec.site_energy, -0.5 * spec.trap_rate);

  if (spec.kind == Topology::ExtendedStar) {
    for (int b = 1; b <= spec.branches; ++b) {
      for (int s = 1; s <= L; ++s) {
        const int i = star_site(b, s, L);
        H(i, i) = spec.site_energy + (s == L ? spec.defect : 0.0);
        if (s < L) {
          const int j = star_site(b, s + 1, L);
          H(i, j) = H(j, i) = J;
        }
      }
      const int first = star_site(b, 1, L);
      H(0, first) = H(first, 0) = J;
    }
  } else {
    for (int s = 1; s <= L; ++s) {
      H(s, s) = spec.site_energy + (s == L ? spec.defect : 0.0);
      if (s < L) H(s, s + 1) = H(s + 1, s) = J;
    }
    H(0, 1) = H(1, 0) = J * std::sqrt(static_cast<double>(spec.branches));
  }
  return Hamiltonian(spec, std::move(H));
}

DensityMatrix::DensityMatrix(NetworkSpec spec, ComplexMatrix rho)
    : spec_(spec), rho_(std::move(rho)) {}

double DensityMatrix::trace() const { return rho_.trace().real(); }

double DensityMatrix::population(int site) const { return rho_(site, site).real(); }

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::purity_defect() const {
  return (rho_ * rho_ - rho_).cwiseAbs().maxCoeff();
}

DensityMatrix initial_state(const NetworkSpec& spec) {
  spec.validate();
  const int n = spec.total_sites();
  ComplexVector psi = ComplexVector::Zero(n);
  if (spec.kind == Topology::ExtendedStar) {
    const double amplitude = 1.0 / std::sqrt(static_cast<double>(spec.branches));
    for (int b = 1; b <= spec.branches; ++b) {
      psi(star_site(b, spec.length, spec.length)) = amplitude;
    }
  } else {
    psi(spec.length) = 1.0;
  }
  return DensityMatrix(spec, psi * psi.adjoint());
}

NetworkSpec star_to_chain(const NetworkSpec& star) {
  if (star.kind != Topology::ExtendedStar) {
    throw InvalidSpec("star_to_chain expects an extended star");
  }
  star.validate();
  NetworkSpec chain = star;
  chain.kind = Topology::AsymmetricChain;
  return chain;
}

}  // namespace trapnet
