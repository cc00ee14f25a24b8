#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "trapnet/liouville.hpp"
#include "trapnet/observables.hpp"
#include "trapnet/star_reduced.hpp"

using namespace trapnet;

namespace {

NetworkSpec star(int n, int l, double delta, double trap) {
  NetworkSpec spec;
  spec.branches = n;
  spec.length = l;
  spec.defect = delta;
  spec.trap_rate = trap;
  return spec;
}

}  // namespace

TEST(ReducedLayout, IndexMapIsABijection) {
  const ReducedLayout layout(3);
  EXPECT_EQ(layout.size(), 1 + 6 + 18);
  std::vector<int> hits(layout.size(), 0);
  ++hits[layout.core()];
  for (int s = 1; s <= 3; ++s) {
    ++hits[layout.core_branch(s)];
    ++hits[layout.core_branch_conj(s)];
    for (int t = 1; t <= 3; ++t) {
      ++hits[layout.intra(s, t)];
      ++hits[layout.inter(s, t)];
    }
  }
  for (const int h : hits) EXPECT_EQ(h, 1);
}

TEST(ReducedState, InitialImageMatchesProjection) {
  for (const int n : {2, 3, 6}) {
    const NetworkSpec spec = star(n, 4, 1.0, 0.1);
    const ReducedState projected = reduce(initial_state(spec));
    const ReducedState hard_coded = initial_reduced_state(spec);
    EXPECT_LT((projected.to_vector() - hard_coded.to_vector()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(hard_coded.intra(3, 3).real(), 1.0, 1e-15);
    EXPECT_NEAR(hard_coded.inter(3, 3).real(), n - 1.0, 1e-15);
    EXPECT_NEAR(hard_coded.population(), 1.0, 1e-15);
  }
}

TEST(ReducedState, VectorRoundTrip) {
  const ReducedState s = reduce(initial_state(star(3, 2, 0.5, 0.1)));
  const ReducedState back = ReducedState::from_vector(s.to_vector(), 2);
  EXPECT_EQ(back.to_vector(), s.to_vector());
}

TEST(ReducedGenerator, DimensionIndependentOfBranches) {
  for (const int n : {2, 5, 40}) {
    EXPECT_EQ(build_reduced_generator(star(n, 4, 1.0, 0.1), 0.2).dim(), 1 + 8 + 32);
  }
}

TEST(ReducedGenerator, CommutesWithProjection) {
  // d/dt reduce(rho) must equal G reduce(rho) for any rho obeying the
  // rotation symmetry; the evolved initial state is such a rho.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int draw = 0; draw < 6; ++draw) {
    const NetworkSpec spec = star(2 + draw % 4, 1 + draw % 3, 3.0 * u(rng), u(rng));
    const double gamma = u(rng);
    const Liouvillian full = build_liouvillian(build_hamiltonian(spec), gamma);
    const ReducedGenerator reduced = build_reduced_generator(spec, gamma);
    const std::vector<double> t = {1.7};
    const DensityMatrix rho = propagate(full, initial_state(spec), t).front();
    const ComplexVector drho = full.generator() * vectorize(rho.matrix());
    const ReducedState lhs =
        reduce(DensityMatrix(spec, unvectorize(drho, spec.total_sites())));
    const ComplexVector rhs = reduced.matrix() * reduce(rho).to_vector();
    EXPECT_LT((lhs.to_vector() - rhs).cwiseAbs().maxCoeff(), 1e-12) << "draw " << draw;
  }
}

TEST(EvolveReduced, MatchesFullLiouvillian) {
  std::mt19937 rng(101);
  std::uniform_int_distribution<int> n(2, 5), l(1, 5);
  std::uniform_real_distribution<double> delta(0.0, 3.0), trap(0.05, 0.5), gamma(0.0, 1.0);
  int tested = 0;
  while (tested < 8) {
    const NetworkSpec spec = star(n(rng), l(rng), delta(rng), trap(rng));
    if (spec.total_sites() > 26) continue;
    ++tested;
    const double g = gamma(rng);
    const auto times = uniform_grid(10.0 * spec.total_sites() / spec.trap_rate, 300);
    const ObservableSeries reduced = evolve_reduced(build_reduced_generator(spec, g), times);
    const auto states = propagate(build_liouvillian(build_hamiltonian(spec), g),
                                  initial_state(spec), times);
    const ObservableSeries full = absorption_probability(states, times, g);
    for (std::size_t k = 0; k < times.size(); ++k) {
      ASSERT_NEAR(reduced.absorbed[k], full.absorbed[k], 1e-8)
          << "N=" << spec.branches << " L=" << spec.length << " t=" << times[k];
    }
    EXPECT_EQ(reduced.provenance, Engine::Reduced);
  }
}

TEST(EvolveReduced, ConservesPopulationWithoutTrap) {
  const NetworkSpec spec = star(4, 3, 1.5, 0.0);
  const ReducedGenerator g = build_reduced_generator(spec, 0.3);
  const auto times = uniform_grid(300.0, 100);
  for (const auto& state : evolve_reduced_states(g, initial_reduced_state(spec), times)) {
    EXPECT_NEAR(state.population(), 1.0, 1e-8);
  }
}
