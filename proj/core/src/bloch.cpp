#include "trapnet/network.hpp"

#include <cmath>
#include <numbers>

#include "trapnet/errors.hpp"

namespace trapnet {

BlochBasis::BlochBasis(const NetworkSpec& star)
    : spec_(star), branches_(star.branches), length_(star.length) {
  if (star.kind != Topology::ExtendedStar) {
    throw InvalidSpec("Bloch basis is defined for the extended star only");
  }
  star.validate();
}

double BlochBasis::angle() const {
  return 2.0 * std::numbers::pi / static_cast<double>(branches_);
}

ComplexVector BlochBasis::state(int k, int s) const {
  if (k < 1 || k > branches_ || s < 1 || s > length_) {
    throw InvalidSpec("Bloch state index out of range");
  }
  const int n = 1 + branches_ * length_;
  const double norm = 1.0 / std::sqrt(static_cast<double>(branches_));
  ComplexVector chi = ComplexVector::Zero(n);
  for (int b = 1; b <= branches_; ++b) {
    const double phase = -static_cast<double>(k) * static_cast<double>(b) * angle();
    chi(star_site(b, s, length_)) = norm * std::polar(1.0, phase);
  }
  return chi;
}

ComplexMatrix BlochBasis::unitary() const {
  const int n = 1 + branches_ * length_;
  ComplexMatrix U = ComplexMatrix::Zero(n, n);
  U(0, 0) = 1.0;
  for (int k = 1; k <= branches_; ++k) {
    for (int s = 1; s <= length_; ++s) {
      U.col(1 + (k - 1) * length_ + (s - 1)) = state(k, s);
    }
  }
  return U;
}

std::vector<int> BlochBasis::block_columns(int k) const {
  std::vector<int> cols;
  if (k == branches_) cols.push_back(0);
  for (int s = 1; s <= length_; ++s) cols.push_back(1 + (k - 1) * length_ + (s - 1));
  return cols;
}

ComplexMatrix BlochBasis::project_block(const Hamiltonian& star, int k) const {
  const ComplexMatrix U = unitary();
  const auto cols = block_columns(k);
  const int m = static_cast<int>(cols.size());
  ComplexMatrix basis(U.rows(), m);
  for (int j = 0; j < m; ++j) basis.col(j) = U.col(cols[j]);
  return basis.adjoint() * star.matrix() * basis;
}

ComplexMatrix BlochBasis::analytic_block(int k) const {
  if (k < 1 || k > branches_) throw InvalidSpec("Bloch block index out of range");
  if (k == branches_) return build_hamiltonian(star_to_chain(spec_)).matrix();

  const int L = length_;
  ComplexMatrix block = ComplexMatrix::Zero(L, L);
  for (int s = 0; s < L; ++s) {
    block(s, s) = spec_.site_energy + (s == L - 1 ? spec_.defect : 0.0);
    if (s + 1 < L) block(s, s + 1) = block(s + 1, s) = spec_.hopping;
  }
  return block;
}

}  // namespace trapnet
