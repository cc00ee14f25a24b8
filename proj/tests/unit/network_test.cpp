#include <gtest/gtest.h>

#include <cmath>

#include "trapnet/errors.hpp"
#include "trapnet/network.hpp"

using namespace trapnet;

namespace {

NetworkSpec make(Topology kind, int n, int l, double delta = 0.7, double trap = 0.3) {
  NetworkSpec spec;
  spec.kind = kind;
  spec.branches = n;
  spec.length = l;
  spec.defect = delta;
  spec.trap_rate = trap;
  return spec;
}

}  // namespace

TEST(NetworkSpec, SiteCounts) {
  EXPECT_EQ(make(Topology::ExtendedStar, 4, 3).total_sites(), 13);
  EXPECT_EQ(make(Topology::AsymmetricChain, 4, 3).total_sites(), 4);
}

TEST(NetworkSpec, RejectsInvalidParameters) {
  auto spec = make(Topology::ExtendedStar, 3, 2);
  spec.hopping = 0.0;
  EXPECT_THROW(spec.validate(), InvalidSpec);
  spec = make(Topology::ExtendedStar, 3, 0);
  EXPECT_THROW(spec.validate(), InvalidSpec);
  spec = make(Topology::ExtendedStar, 0, 2);
  EXPECT_THROW(spec.validate(), InvalidSpec);
  spec = make(Topology::ExtendedStar, 3, 2, 0.0, -0.1);
  EXPECT_THROW(spec.validate(), InvalidSpec);
  EXPECT_THROW(build_hamiltonian(spec), InvalidSpec);
}

TEST(NetworkSpec, TopologyNames) {
  EXPECT_EQ(parse_topology("star"), Topology::ExtendedStar);
  EXPECT_EQ(parse_topology("chain"), Topology::AsymmetricChain);
  EXPECT_EQ(to_string(Topology::AsymmetricChain), "chain");
  EXPECT_THROW(parse_topology("ring"), InvalidSpec);
}

TEST(StarSites, FlatIndexRoundTrip) {
  const int l = 4;
  EXPECT_EQ(star_site(1, 1, l), 1);
  EXPECT_EQ(star_site(2, 1, l), 5);
  EXPECT_EQ(star_site(3, 4, l), 12);
  for (int flat = 1; flat <= 3 * l; ++flat) {
    const auto [b, s] = star_site_of(flat, l);
    EXPECT_EQ(star_site(b, s, l), flat);
  }
  EXPECT_EQ(star_site_of(0, l), std::make_pair(0, 0));
}

TEST(Hamiltonian, StarStructure) {
  const auto spec = make(Topology::ExtendedStar, 3, 3, 1.25, 0.4);
  const ComplexMatrix h = build_hamiltonian(spec).matrix();
  ASSERT_EQ(h.rows(), 10);
  EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(h(0, 0), Complex(0.0, -0.2));
  for (int b = 1; b <= 3; ++b) {
    EXPECT_EQ(h(0, star_site(b, 1, 3)), Complex(1.0, 0.0));
    EXPECT_EQ(h(star_site(b, 1, 3), star_site(b, 2, 3)), Complex(1.0, 0.0));
    EXPECT_EQ(h(star_site(b, 3, 3), star_site(b, 3, 3)), Complex(1.25, 0.0));
    EXPECT_EQ(h(star_site(b, 2, 3), star_site(b, 2, 3)), Complex(0.0, 0.0));
  }
  // Only the trap carries an imaginary part.
  ComplexMatrix rest = h;
  rest(0, 0) = 0.0;
  EXPECT_EQ(rest.imag().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(h(star_site(1, 3, 3), star_site(2, 3, 3)), Complex(0.0, 0.0));
}

TEST(Hamiltonian, ChainStructure) {
  const auto spec = make(Topology::AsymmetricChain, 5, 3, 2.0, 0.1);
  const ComplexMatrix h = build_hamiltonian(spec).matrix();
  ASSERT_EQ(h.rows(), 4);
  EXPECT_NEAR(h(0, 1).real(), std::sqrt(5.0), 1e-15);
  EXPECT_EQ(h(1, 2), Complex(1.0, 0.0));
  EXPECT_EQ(h(3, 3), Complex(2.0, 0.0));
  EXPECT_EQ(h(0, 0), Complex(0.0, -0.05));
  EXPECT_EQ(h(0, 2), Complex(0.0, 0.0));
}

TEST(Hamiltonian, SiteEnergyShiftsEveryDiagonal) {
  auto spec = make(Topology::ExtendedStar, 2, 2, 0.5, 0.2);
  spec.site_energy = 0.3;
  const ComplexMatrix h = build_hamiltonian(spec).matrix();
  EXPECT_EQ(h(0, 0), Complex(0.3, -0.1));
  EXPECT_EQ(h(2, 2), Complex(0.8, 0.0));
  EXPECT_EQ(h(1, 1), Complex(0.3, 0.0));
}

TEST(InitialState, PureAndNormalized) {
  for (const auto kind : {Topology::ExtendedStar, Topology::AsymmetricChain}) {
    const DensityMatrix rho = initial_state(make(kind, 4, 3));
    EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
    EXPECT_LT(rho.purity_defect(), 1e-12);
    EXPECT_LT(rho.hermiticity_error(), 1e-15);
  }
  const DensityMatrix star = initial_state(make(Topology::ExtendedStar, 4, 3));
  EXPECT_NEAR(star.population(star_site(2, 3, 3)), 0.25, 1e-15);
  EXPECT_NEAR(star.matrix()(star_site(1, 3, 3), star_site(4, 3, 3)).real(), 0.25, 1e-15);
  const DensityMatrix chain = initial_state(make(Topology::AsymmetricChain, 4, 3));
  EXPECT_EQ(chain.population(3), 1.0);
}

TEST(InitialState, StarToChainKeepsParameters) {
  const auto star = make(Topology::ExtendedStar, 4, 3, 1.1, 0.2);
  const NetworkSpec chain = star_to_chain(star);
  EXPECT_EQ(chain.kind, Topology::AsymmetricChain);
  EXPECT_EQ(chain.branches, 4);
  EXPECT_EQ(chain.length, 3);
  EXPECT_EQ(chain.defect, 1.1);
  EXPECT_THROW((void)star_to_chain(chain), InvalidSpec);
}

TEST(BlochBasis, UnitaryChangeOfBasis) {
  const auto spec = make(Topology::ExtendedStar, 5, 3);
  const ComplexMatrix u = BlochBasis(spec).unitary();
  const auto n = u.rows();
  EXPECT_LT((u.adjoint() * u - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(BlochBasis, StarIsBlockDiagonal) {
  for (const int n : {2, 3, 5, 6}) {
    const auto spec = make(Topology::ExtendedStar, n, 4, 1.7, 0.35);
    const Hamiltonian h = build_hamiltonian(spec);
    const BlochBasis basis(spec);
    const ComplexMatrix u = basis.unitary();
    const ComplexMatrix rotated = u.adjoint() * h.matrix() * u;

    // Zero every in-block entry; what remains must vanish.
    ComplexMatrix off = rotated;
    for (int k = 1; k <= n; ++k) {
      const auto cols = basis.block_columns(k);
      for (const int r : cols) {
        for (const int c : cols) off(r, c) = 0.0;
      }
    }
    EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-12) << "N=" << n;

    for (int k = 1; k <= n; ++k) {
      const ComplexMatrix projected = basis.project_block(h, k);
      const ComplexMatrix analytic = basis.analytic_block(k);
      ASSERT_EQ(projected.rows(), analytic.rows());
      EXPECT_LT((projected - analytic).cwiseAbs().maxCoeff(), 1e-12) << "N=" << n << " k=" << k;
    }
  }
}

TEST(BlochBasis, SymmetricBlockIsTheChain) {
  const auto spec = make(Topology::ExtendedStar, 4, 3, 1.3, 0.2);
  const ComplexMatrix block = BlochBasis(spec).analytic_block(4);
  const ComplexMatrix chain = build_hamiltonian(star_to_chain(spec)).matrix();
  EXPECT_LT((block - chain).cwiseAbs().maxCoeff(), 1e-15);
}
