#include "trapnet/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "trapnet/liouville.hpp"
#include "trapnet/series.hpp"

namespace trapnet {
namespace {

enum Slot { kTrace, kAbsorbed, kHermiticity, kPositivity, kSpectrum, kConjugate, kSlots };

std::string describe(const InvariantDraw& draw) {
  std::ostringstream out;
  out << to_string(draw.spec.kind) << " N=" << draw.spec.branches << " L=" << draw.spec.length
      << " delta=" << draw.spec.defect << " gamma_trap=" << draw.spec.trap_rate
      << " gamma=" << draw.dephasing;
  return out.str();
}

void record(InvariantCheck& check, double excess, double tolerance, const InvariantDraw& draw,
            const std::string& where) {
  ++check.checks;
  check.worst = std::max(check.worst, excess);
  if (excess > tolerance) {
    if (check.violations == 0) check.first_failure = describe(draw) + " " + where;
    ++check.violations;
  }
}

}  // namespace

bool InvariantReport::passed() const {
  return std::ranges::all_of(checks, [](const InvariantCheck& c) { return c.passed(); });
}

long InvariantReport::violations() const {
  long total = 0;
  for (const auto& c : checks) total += c.violations;
  return total;
}

std::vector<InvariantDraw> random_draws(int count, std::uint64_t seed, const DrawLimits& limits) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> branches(limits.min_branches, limits.max_branches);
  std::uniform_int_distribution<int> length(limits.min_length, limits.max_length);
  std::uniform_real_distribution<double> defect(0.0, limits.max_defect);
  std::uniform_real_distribution<double> trap(limits.min_trap, limits.max_trap);
  std::uniform_real_distribution<double> dephasing(0.0, limits.max_dephasing);
  std::bernoulli_distribution chain(0.5);

  std::vector<InvariantDraw> draws;
  draws.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(draws.size()) < count) {
    InvariantDraw draw;
    draw.spec.kind = chain(rng) ? Topology::AsymmetricChain : Topology::ExtendedStar;
    draw.spec.branches = branches(rng);
    draw.spec.length = length(rng);
    draw.spec.defect = defect(rng);
    draw.spec.trap_rate = trap(rng);
    draw.dephasing = dephasing(rng);
    if (draw.spec.total_sites() > limits.max_sites) continue;
    draws.push_back(draw);
  }
  return draws;
}

InvariantReport run_invariant_suite(const std::vector<InvariantDraw>& draws, int points,
                                    const InvariantTolerances& tol) {
  InvariantReport report;
  report.checks.resize(kSlots);
  report.checks[kTrace].name = "trace_monotone";
  report.checks[kAbsorbed].name = "absorbed_monotone";
  report.checks[kHermiticity].name = "hermiticity";
  report.checks[kPositivity].name = "positivity";
  report.checks[kSpectrum].name = "spectrum_real_part";
  report.checks[kConjugate].name = "conjugate_pairs";
  auto& c = report.checks;

  for (const auto& draw : draws) {
    const Liouvillian liouvillian = build_liouvillian(build_hamiltonian(draw.spec), draw.dephasing);

    const Propagator propagator = diagonalize(liouvillian);
    const ComplexVector& lambda = propagator.eigenvalues();
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
      const std::string where = "lambda_" + std::to_string(k);
      record(c[kSpectrum], std::max(0.0, lambda[k].real()), tol.spectrum, draw, where);
      double nearest = std::numeric_limits<double>::infinity();
      for (Eigen::Index m = 0; m < lambda.size(); ++m) {
        nearest = std::min(nearest, std::abs(lambda[m] - std::conj(lambda[k])));
      }
      record(c[kConjugate], nearest / std::max(1.0, std::abs(lambda[k])), tol.conjugate_pair,
             draw, where);
    }

    const double tmax = 5.0 * draw.spec.total_sites() / draw.spec.trap_rate;
    const std::vector<double> times = uniform_grid(tmax, points);
    const std::vector<DensityMatrix> states =
        evolve(propagator, initial_state(draw.spec), times);

    double previous_trace = states.front().trace();
    for (std::size_t i = 0; i < states.size(); ++i) {
      const DensityMatrix& rho = states[i];
      const std::string where = "t=" + std::to_string(times[i]);
      const double trace = rho.trace();
      record(c[kTrace], trace - previous_trace, tol.monotonicity, draw, where);
      // P_A = 1 - Tr rho, so its increments mirror the trace decrements.
      record(c[kAbsorbed], (1.0 - previous_trace) - (1.0 - trace), tol.monotonicity, draw, where);
      previous_trace = trace;

      const DensityMatrix raw(draw.spec, unvectorize(propagator.apply(
                                             vectorize(initial_state(draw.spec).matrix()),
                                             times[i]),
                                         draw.spec.total_sites()));
      record(c[kHermiticity], raw.hermiticity_error(), tol.hermiticity, draw, where);
      record(c[kPositivity], std::max(0.0, -rho.min_eigenvalue()), tol.positivity, draw, where);
    }
  }
  return report;
}

}  // namespace trapnet
