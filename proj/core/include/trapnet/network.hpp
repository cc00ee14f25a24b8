#pragma once

#include <complex>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace trapnet {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class Topology { ExtendedStar, AsymmetricChain };

std::string_view to_string(Topology kind);
Topology parse_topology(std::string_view text);

/// Immutable description of one network: N branches of L sites around a
/// trapping core (star), or the L+1 site chain with a J*sqrt(N) trap bond.
/// Energies are in units of the hopping J, times in units of 1/J.
struct NetworkSpec {
  Topology kind = Topology::ExtendedStar;
  int branches = 3;         // N
  int length = 1;           // L
  double hopping = 1.0;     // J
  double defect = 0.0;      // Delta, energy shift of the input site(s)
  double trap_rate = 0.1;   // Gamma
  double site_energy = 0.0; // eps0

  /// 1 + N*L for the star, 1 + L for the chain.
  [[nodiscard]] int total_sites() const;

  /// Throws InvalidSpec unless J > 0, Gamma >= 0, L >= 1 and N >= 1.
  void validate() const;

  [[nodiscard]] NetworkSpec with_defect(double delta) const;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

// Flat site ordering: index 0 is the core/trap; star sites follow
// branch-major, position-minor; chain sites follow ascending s.

/// Flat index of star site (branch b, position s), both 1-based.
[[nodiscard]] int star_site(int branch, int position, int length);

/// Inverse of star_site; the core maps to (0, 0).
[[nodiscard]] std::pair<int, int> star_site_of(int flat, int length);

/// Complex-symmetric tight-binding Hamiltonian with the trap self-energy
/// -i*Gamma/2 on the core.
class Hamiltonian {
 public:
  Hamiltonian(NetworkSpec spec, ComplexMatrix matrix);

  [[nodiscard]] const ComplexMatrix& matrix() const { return matrix_; }
  [[nodiscard]] const NetworkSpec& spec() const { return spec_; }
  [[nodiscard]] int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  NetworkSpec spec_;
  ComplexMatrix matrix_;
};

[[nodiscard]] Hamiltonian build_hamiltonian(const NetworkSpec& spec);

/// Site-basis reduced density matrix.
class DensityMatrix {
 public:
  DensityMatrix(NetworkSpec spec, ComplexMatrix rho);

  [[nodiscard]] const ComplexMatrix& matrix() const { return rho_; }
  [[nodiscard]] const NetworkSpec& spec() const { return spec_; }
  [[nodiscard]] int dim() const { return static_cast<int>(rho_.rows()); }

  [[nodiscard]] double trace() const;
  [[nodiscard]] double population(int site) const;
  /// max |rho - rho^dagger|
  [[nodiscard]] double hermiticity_error() const;
  /// Smallest eigenvalue of the Hermitian part.
  [[nodiscard]] double min_eigenvalue() const;
  /// max |rho^2 - rho|
  [[nodiscard]] double purity_defect() const;

 private:
  NetworkSpec spec_;
  ComplexMatrix rho_;
};

/// Star: the pure state (1/sqrt N) sum_b |b,L>. Chain: |L><L|.
[[nodiscard]] DensityMatrix initial_state(const NetworkSpec& spec);

/// The asymmetric chain carrying the same (N, L, J, Delta, Gamma, eps0).
[[nodiscard]] NetworkSpec star_to_chain(const NetworkSpec& star);

/// Rotation-symmetric basis of the star: the core plus the Bloch states
/// chi_s^(k) = N^{-1/2} sum_b exp(-i k b theta) |b,s>, theta = 2 pi / N.
class BlochBasis {
 public:
  explicit BlochBasis(const NetworkSpec& star);

  [[nodiscard]] int branches() const { return branches_; }
  [[nodiscard]] int length() const { return length_; }
  [[nodiscard]] double angle() const;

  /// Coefficients of chi_s^(k) over the star sites (k in 1..N, s in 1..L).
  [[nodiscard]] ComplexVector state(int k, int s) const;

  /// Column 0 is the core; column 1 + (k-1)L + (s-1) is chi_s^(k).
  [[nodiscard]] ComplexMatrix unitary() const;

  /// Basis columns spanning block k: L Bloch states, preceded by the core
  /// when k == N.
  [[nodiscard]] std::vector<int> block_columns(int k) const;

  /// Block H^(k) obtained by projecting the star Hamiltonian.
  [[nodiscard]] ComplexMatrix project_block(const Hamiltonian& star, int k) const;

  /// Closed-form block H^(k): tridiagonal L x L for k != N, and the
  /// (L+1) x (L+1) asymmetric chain Hamiltonian for k == N.
  [[nodiscard]] ComplexMatrix analytic_block(int k) const;

 private:
  NetworkSpec spec_;
  int branches_;
  int length_;
};

}  // namespace trapnet
