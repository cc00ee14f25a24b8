#include "trapnet/star_reduced.hpp"

#include "trapnet/errors.hpp"

namespace trapnet {
namespace {

void require_star(const NetworkSpec& spec) {
  if (spec.kind != Topology::ExtendedStar) {
    throw InvalidSpec("the reduced equations apply to the extended star only");
  }
  spec.validate();
}

}  // namespace

ReducedLayout::ReducedLayout(int length) : length_(length) {
  if (length < 1) throw InvalidSpec("branch length L must be >= 1");
}

ComplexVector ReducedLayout::population_functional() const {
  ComplexVector f = ComplexVector::Zero(size());
  f(core()) = 1.0;
  for (int s = 1; s <= length_; ++s) f(intra(s, s)) = 1.0;
  return f;
}

ComplexVector ReducedState::to_vector() const {
  const int L = static_cast<int>(intra.rows());
  const ReducedLayout layout(L);
  ComplexVector v(layout.size());
  v(layout.core()) = core;
  for (int s = 1; s <= L; ++s) {
    for (int t = 1; t <= L; ++t) {
      v(layout.intra(s, t)) = intra(s - 1, t - 1);
      v(layout.inter(s, t)) = inter(s - 1, t - 1);
    }
    v(layout.core_branch(s)) = core_branch(s - 1);
    v(layout.core_branch_conj(s)) = core_branch_conj(s - 1);
  }
  return v;
}

ReducedState ReducedState::from_vector(const ComplexVector& v, int length) {
  const ReducedLayout layout(length);
  if (v.size() != layout.size()) throw InvalidSpec("reduced vector has the wrong length");
  ReducedState state;
  state.core = v(layout.core());
  state.intra.resize(length, length);
  state.inter.resize(length, length);
  state.core_branch.resize(length);
  state.core_branch_conj.resize(length);
  for (int s = 1; s <= length; ++s) {
    for (int t = 1; t <= length; ++t) {
      state.intra(s - 1, t - 1) = v(layout.intra(s, t));
      state.inter(s - 1, t - 1) = v(layout.inter(s, t));
    }
    state.core_branch(s - 1) = v(layout.core_branch(s));
    state.core_branch_conj(s - 1) = v(layout.core_branch_conj(s));
  }
  return state;
}

double ReducedState::population() const { return core.real() + intra.trace().real(); }

ReducedState reduce(const DensityMatrix& rho) {
  const NetworkSpec& spec = rho.spec();
  require_star(spec);
  const int N = spec.branches;
  const int L = spec.length;
  const ComplexMatrix& m = rho.matrix();

  ReducedState state;
  state.core = m(0, 0);
  state.intra = ComplexMatrix::Zero(L, L);
  state.inter = ComplexMatrix::Zero(L, L);
  state.core_branch = ComplexVector::Zero(L);
  state.core_branch_conj = ComplexVector::Zero(L);
  for (int s = 1; s <= L; ++s) {
    for (int b = 1; b <= N; ++b) {
      const int i = star_site(b, s, L);
      state.core_branch(s - 1) += m(i, 0);
      state.core_branch_conj(s - 1) += std::conj(m(i, 0));
      for (int t = 1; t <= L; ++t) {
        for (int c = 1; c <= N; ++c) {
          const Complex value = m(i, star_site(c, t, L));
          if (b == c) {
            state.intra(s - 1, t - 1) += value;
          } else {
            state.inter(s - 1, t - 1) += value;
          }
        }
      }
    }
  }
  return state;
}

ReducedState initial_reduced_state(const NetworkSpec& star) {
  require_star(star);
  const int L = star.length;
  ReducedState state;
  state.intra = ComplexMatrix::Zero(L, L);
  state.inter = ComplexMatrix::Zero(L, L);
  state.core_branch = ComplexVector::Zero(L);
  state.core_branch_conj = ComplexVector::Zero(L);
  // N populations of 1/N, and N(N-1) inter-branch coherences of 1/N.
  state.intra(L - 1, L - 1) = 1.0;
  state.inter(L - 1, L - 1) = static_cast<double>(star.branches - 1);
  return state;
}

ReducedGenerator::ReducedGenerator(NetworkSpec spec, double dephasing, ComplexMatrix generator,
                                   Eigen::MatrixXd branch_hamiltonian)
    : spec_(spec),
      dephasing_(dephasing),
      generator_(std::move(generator)),
      branch_(std::move(branch_hamiltonian)) {}

ReducedGenerator build_reduced_generator(const NetworkSpec& star, double dephasing) {
  require_star(star);
  if (!(dephasing >= 0.0)) throw InvalidSpec("dephasing rate must be non-negative");

  const int L = star.length;
  const double J = star.hopping;
  const double N = star.branches;
  const double trap = star.trap_rate;
  const double gamma = dephasing;
  const Complex i(0.0, 1.0);
  const ReducedLayout at(L);

  // eps0 drops out: it enters every commutator and the core-branch
  // coherences through identical diagonal shifts.
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(L, L);
  for (int s = 0; s + 1 < L; ++s) h(s, s + 1) = h(s + 1, s) = J;
  h(L - 1, L - 1) = star.defect;

  ComplexMatrix G = ComplexMatrix::Zero(at.size(), at.size());

  // dP0/dt = -Gamma P0 - iJ (K_1 - K_1*)
  G(at.core(), at.core()) = -trap;
  G(at.core(), at.core_branch(1)) += -i * J;
  G(at.core(), at.core_branch_conj(1)) += i * J;

  for (int s = 1; s <= L; ++s) {
    for (int t = 1; t <= L; ++t) {
      // dP_st/dt = -i[h, P]_st + iJ (K_s d_t1 - K*_t d_s1) - gamma (1 - d_st) P_st
      // dC_st/dt = -i[h, C]_st + iJ(N-1)(K_s d_t1 - K*_t d_s1) - gamma C_st
      const int rp = at.intra(s, t);
      const int rc = at.inter(s, t);
      for (int u = 1; u <= L; ++u) {
        G(rp, at.intra(u, t)) += -i * h(s - 1, u - 1);
        G(rp, at.intra(s, u)) += i * h(u - 1, t - 1);
        G(rc, at.inter(u, t)) += -i * h(s - 1, u - 1);
        G(rc, at.inter(s, u)) += i * h(u - 1, t - 1);
      }
      if (t == 1) {
        G(rp, at.core_branch(s)) += i * J;
        G(rc, at.core_branch(s)) += i * J * (N - 1.0);
      }
      if (s == 1) {
        G(rp, at.core_branch_conj(t)) += -i * J;
        G(rc, at.core_branch_conj(t)) += -i * J * (N - 1.0);
      }
      if (s != t) G(rp, rp) += -gamma;
      G(rc, rc) += -gamma;
    }
  }

  for (int s = 1; s <= L; ++s) {
    // dK_s/dt = -(Gamma/2 + gamma) K_s - i (h K)_s + iJ (P_s1 + C_s1) - iJN P0 d_s1
    const int rk = at.core_branch(s);
    G(rk, rk) += -(0.5 * trap + gamma);
    for (int u = 1; u <= L; ++u) G(rk, at.core_branch(u)) += -i * h(s - 1, u - 1);
    G(rk, at.intra(s, 1)) += i * J;
    G(rk, at.inter(s, 1)) += i * J;
    if (s == 1) G(rk, at.core()) += -i * J * N;

    // dK*_s/dt = -(Gamma/2 + gamma) K*_s + i (h K*)_s - iJ (P_1s + C_1s) + iJN P0 d_s1
    const int rq = at.core_branch_conj(s);
    G(rq, rq) += -(0.5 * trap + gamma);
    for (int u = 1; u <= L; ++u) G(rq, at.core_branch_conj(u)) += i * h(s - 1, u - 1);
    G(rq, at.intra(1, s)) += -i * J;
    G(rq, at.inter(1, s)) += -i * J;
    if (s == 1) G(rq, at.core()) += i * J * N;
  }

  return ReducedGenerator(star, dephasing, std::move(G), std::move(h));
}

ObservableSeries evolve_reduced(const ReducedGenerator& generator, std::span<const double> times) {
  const ReducedLayout layout = generator.layout();
  const ComplexVector v0 = initial_reduced_state(generator.spec()).to_vector();
  const ComplexVector functional = layout.population_functional();

  ObservableSeries series;
  series.times.assign(times.begin(), times.end());
  series.spec = generator.spec();
  series.dephasing = generator.dephasing();
  series.provenance = Engine::Reduced;
  series.absorbed.reserve(times.size());

  try {
    const ModeExpansion surviving = diagonalize(generator.matrix()).expand(functional, v0);
    for (const double t : times) series.absorbed.push_back(clamp_probability(1.0 - surviving(t).real()));
  } catch (const NearDefective&) {
    for (const auto& v : integrate_linear(generator.matrix(), v0, times)) {
      series.absorbed.push_back(clamp_probability(1.0 - (functional.transpose() * v).value().real()));
    }
  }
  return series;
}

std::vector<ReducedState> evolve_reduced_states(const ReducedGenerator& generator,
                                                const ReducedState& initial,
                                                std::span<const double> times) {
  const Propagator propagator = diagonalize(generator.matrix());
  const ComplexVector v0 = initial.to_vector();
  std::vector<ReducedState> states;
  states.reserve(times.size());
  for (const double t : times) {
    states.push_back(ReducedState::from_vector(propagator.apply(v0, t), generator.spec().length));
  }
  return states;
}

}  // namespace trapnet
