#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "trapnet/errors.hpp"
#include "trapnet/liouville.hpp"
#include "trapnet/series.hpp"

using namespace trapnet;

namespace {

NetworkSpec random_spec(std::mt19937& rng, int max_sites) {
  std::uniform_int_distribution<int> n(1, 4), l(1, 3);
  std::uniform_real_distribution<double> delta(0.0, 3.0), trap(0.05, 1.0);
  std::bernoulli_distribution chain(0.5);
  NetworkSpec spec;
  do {
    spec.kind = chain(rng) ? Topology::AsymmetricChain : Topology::ExtendedStar;
    spec.branches = n(rng);
    spec.length = l(rng);
  } while (spec.total_sites() > max_sites);
  spec.defect = delta(rng);
  spec.trap_rate = trap(rng);
  return spec;
}

}  // namespace

TEST(Liouvillian, HandAssembledDimer) {
  // Two sites: trap with -i G/2 and a defect site at energy d, bond c.
  NetworkSpec spec;
  spec.kind = Topology::AsymmetricChain;
  spec.branches = 4;
  spec.length = 1;
  spec.defect = 0.6;
  spec.trap_rate = 0.2;
  const double c = 2.0;  // J sqrt(4)
  const double d = 0.6, g = 0.2, gamma = 0.3;
  const Complex i(0.0, 1.0);

  // Order: rho00, rho01, rho10, rho11.
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = -g;
  expected(0, 1) = i * c;
  expected(0, 2) = -i * c;
  expected(1, 0) = i * c;
  expected(1, 1) = -g / 2 + i * d - gamma;
  expected(1, 3) = -i * c;
  expected(2, 0) = -i * c;
  expected(2, 2) = -g / 2 - i * d - gamma;
  expected(2, 3) = i * c;
  expected(3, 1) = -i * c;
  expected(3, 2) = i * c;

  const Liouvillian l = build_liouvillian(build_hamiltonian(spec), gamma);
  EXPECT_LT((l.generator() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Liouvillian, RabiSpectrum) {
  NetworkSpec spec;
  spec.kind = Topology::AsymmetricChain;
  spec.branches = 3;
  spec.length = 1;
  spec.trap_rate = 0.0;
  const Propagator p = diagonalize(build_liouvillian(build_hamiltonian(spec), 0.0));
  std::vector<double> imag;
  for (const Complex lambda : p.eigenvalues()) {
    EXPECT_NEAR(lambda.real(), 0.0, 1e-13);
    imag.push_back(lambda.imag());
  }
  std::sort(imag.begin(), imag.end());
  const double omega = 2.0 * std::sqrt(3.0);
  EXPECT_NEAR(imag[0], -omega, 1e-12);
  EXPECT_NEAR(imag[1], 0.0, 1e-12);
  EXPECT_NEAR(imag[2], 0.0, 1e-12);
  EXPECT_NEAR(imag[3], omega, 1e-12);
}

TEST(Liouvillian, MatchesKroneckerConstruction) {
  std::mt19937 rng(17);
  for (int draw = 0; draw < 12; ++draw) {
    const NetworkSpec spec = random_spec(rng, 10);
    const double gamma = 0.1 * draw;
    const Hamiltonian h = build_hamiltonian(spec);
    const ComplexMatrix reference = oracle::kron_liouvillian(h.matrix(), gamma);
    EXPECT_LT((build_liouvillian(h, gamma).generator() - reference).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Liouvillian, RejectsNegativeDephasing) {
  EXPECT_THROW((void)build_liouvillian(build_hamiltonian(NetworkSpec{}), -0.1), InvalidSpec);
}

TEST(Liouvillian, VectorizationIsRowMajor) {
  ComplexMatrix rho(2, 2);
  rho << 1.0, 2.0, 3.0, 4.0;
  const ComplexVector v = vectorize(rho);
  EXPECT_EQ(v[1], Complex(2.0, 0.0));
  EXPECT_EQ(v[flat_index(1, 0, 2)], Complex(3.0, 0.0));
  EXPECT_EQ(unvectorize(v, 2), rho);
  EXPECT_EQ((trace_functional(2).transpose() * v).value(), Complex(5.0, 0.0));
}

TEST(Evolve, AgreesWithDirectIntegration) {
  std::mt19937 rng(29);
  for (int draw = 0; draw < 10; ++draw) {
    const NetworkSpec spec = random_spec(rng, 10);
    const double gamma = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const Liouvillian l = build_liouvillian(build_hamiltonian(spec), gamma);
    const DensityMatrix rho0 = initial_state(spec);
    const std::vector<double> times = {0.0, 0.7, 3.0, 12.0, 40.0};
    const auto spectral = propagate(l, rho0, times);
    const auto reference =
        oracle::integrate_density(build_hamiltonian(spec).matrix(), gamma, rho0.matrix(), times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      EXPECT_LT((spectral[k].matrix() - reference[k]).cwiseAbs().maxCoeff(), 1e-6)
          << "draw " << draw << " t=" << times[k];
    }
  }
}

TEST(Evolve, TraceDecreasesAndStatesStayPhysical) {
  NetworkSpec spec;
  spec.branches = 3;
  spec.length = 3;
  spec.defect = std::sqrt(2.0);
  spec.trap_rate = 0.2;
  const Liouvillian l = build_liouvillian(build_hamiltonian(spec), 0.05);
  const auto times = uniform_grid(200.0, 400);
  const auto states = propagate(l, initial_state(spec), times);
  double previous = 1.0 + 1e-12;
  for (const auto& rho : states) {
    EXPECT_LE(rho.trace(), previous + 1e-8);
    EXPECT_LT(rho.hermiticity_error(), 1e-14);
    EXPECT_GE(rho.min_eigenvalue(), -1e-8);
    previous = rho.trace();
  }
}

TEST(Evolve, ExceptionalPointFallsBackToIntegration) {
  // Dimer at the trap's exceptional point: G = 4 c makes H_eff defective.
  NetworkSpec spec;
  spec.kind = Topology::AsymmetricChain;
  spec.branches = 1;
  spec.length = 1;
  spec.trap_rate = 4.0;
  const Liouvillian l = build_liouvillian(build_hamiltonian(spec), 0.0);
  const std::vector<double> times = {0.0, 0.5, 1.5, 4.0};
  const auto states = propagate(l, initial_state(spec), times);
  const auto reference = oracle::integrate_density(build_hamiltonian(spec).matrix(), 0.0,
                                                   initial_state(spec).matrix(), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    EXPECT_LT((states[k].matrix() - reference[k]).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(Spectrum, CsvHeader) {
  const Propagator p = diagonalize(build_liouvillian(build_hamiltonian(NetworkSpec{}), 0.1));
  std::ostringstream out;
  write_spectrum_csv(out, p);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "k,re_lambda,im_lambda");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), p.dim() + 1);
}
