#include "trapnet/observables.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include <boost/math/tools/roots.hpp>

#include "trapnet/classical.hpp"
#include "trapnet/errors.hpp"
#include "trapnet/liouville.hpp"
#include "trapnet/star_reduced.hpp"

namespace trapnet {
namespace {

constexpr double kBisectionWidth = 1e-8;

// P_A(t) through direct integration, for generators the spectral route
// rejects. Checkpoints let repeated queries restart from the closest
// earlier state.
class SteppedCurve {
 public:
  SteppedCurve(ComplexMatrix generator, ComplexVector v0, ComplexVector functional)
      : generator_(std::move(generator)), functional_(std::move(functional)) {
    checkpoints_.emplace(0.0, std::move(v0));
  }

  double operator()(double t) {
    std::lock_guard lock(mutex_);
    auto it = std::prev(checkpoints_.upper_bound(t));
    const double start = it->first;
    ComplexVector state = it->second;
    if (t > start) {
      const double span[] = {t - start};
      state = integrate_linear(generator_, state, span).front();
      if (checkpoints_.size() < 4096) checkpoints_.emplace(t, state);
    }
    return 1.0 - (functional_.transpose() * state).value().real();
  }

 private:
  ComplexMatrix generator_;
  ComplexVector functional_;
  std::map<double, ComplexVector> checkpoints_;
  std::mutex mutex_;
};

AbsorptionCurve::Evaluator linear_curve(const ComplexMatrix& generator, const ComplexVector& v0,
                                        const ComplexVector& functional) {
  try {
    auto modes = std::make_shared<const ModeExpansion>(diagonalize(generator).expand(functional, v0));
    return [modes](double t) { return clamp_probability(1.0 - (*modes)(t).real()); };
  } catch (const NearDefective&) {
    auto stepped = std::make_shared<SteppedCurve>(generator, v0, functional);
    return [stepped](double t) { return clamp_probability((*stepped)(t)); };
  }
}

}  // namespace

AbsorptionCurve::AbsorptionCurve(Evaluator evaluator, double horizon, Engine engine)
    : evaluator_(std::move(evaluator)), horizon_(horizon), engine_(engine) {}

double absorption_horizon(const NetworkSpec& spec) {
  if (!(spec.trap_rate > 0.0)) return std::numeric_limits<double>::infinity();
  return 100.0 * spec.total_sites() / spec.trap_rate;
}

AbsorptionCurve absorption_curve(const NetworkSpec& spec, double dephasing, Engine engine) {
  spec.validate();
  if (!(dephasing >= 0.0)) throw InvalidSpec("dephasing rate must be non-negative");
  const Engine resolved = resolve_engine(engine, spec.kind);
  const double horizon = absorption_horizon(spec);

  switch (resolved) {
    case Engine::FullFLS: {
      const Liouvillian liouvillian = build_liouvillian(build_hamiltonian(spec), dephasing);
      return AbsorptionCurve(linear_curve(liouvillian.generator(),
                                          vectorize(initial_state(spec).matrix()),
                                          trace_functional(liouvillian.sites())),
                             horizon, resolved);
    }
    case Engine::Reduced: {
      const ReducedGenerator generator = build_reduced_generator(spec, dephasing);
      return AbsorptionCurve(linear_curve(generator.matrix(),
                                          initial_reduced_state(spec).to_vector(),
                                          generator.layout().population_functional()),
                             horizon, resolved);
    }
    case Engine::Classical: {
      auto propagator = std::make_shared<const RatePropagator>(build_rate_model(spec, dephasing));
      return AbsorptionCurve(
          [propagator](double t) { return clamp_probability(1.0 - propagator->surviving(t)); },
          horizon, resolved);
    }
    case Engine::Auto:
      break;
  }
  throw InvalidSpec("unresolved engine");
}

ObservableSeries absorption_probability(const std::vector<DensityMatrix>& states,
                                        std::span<const double> times, double dephasing) {
  if (states.size() != times.size()) throw InvalidSpec("states and times differ in length");
  ObservableSeries series;
  series.times.assign(times.begin(), times.end());
  series.dephasing = dephasing;
  series.provenance = Engine::FullFLS;
  if (!states.empty()) series.spec = states.front().spec();
  series.absorbed.reserve(states.size());
  for (const auto& rho : states) series.absorbed.push_back(clamp_probability(1.0 - rho.trace()));
  return series;
}

ObservableSeries sample(const AbsorptionCurve& curve, std::span<const double> times,
                        const NetworkSpec& spec, double dephasing) {
  ObservableSeries series;
  series.times.assign(times.begin(), times.end());
  series.spec = spec;
  series.dephasing = dephasing;
  series.provenance = curve.engine();
  series.absorbed.reserve(times.size());
  for (const double t : times) series.absorbed.push_back(curve(t));
  return series;
}

AbsorptionResult absorption_time(const AbsorptionCurve& curve) {
  const double horizon = curve.horizon();
  if (!std::isfinite(horizon)) {
    throw HorizonExceeded("no absorption without trapping (Gamma = 0)");
  }
  double hi = std::min(1.0, horizon);
  while (curve(hi) < 0.5) {
    if (hi >= horizon) {
      throw HorizonExceeded("P_A stays below 1/2 up to t = " + std::to_string(horizon));
    }
    hi = std::min(2.0 * hi, horizon);
  }
  const double lo = hi == std::min(1.0, horizon) ? 0.0 : 0.5 * hi;

  auto excess = [&curve](double t) { return curve(t) - 0.5; };
  auto narrow = [](double a, double b) { return std::abs(b - a) <= kBisectionWidth; };
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::bisect(excess, lo, hi, narrow, max_iter);
  const double tau = 0.5 * (a + b);
  return {tau, std::abs(curve(tau) - 0.5) < 1e-6, TauMethod::Bracketed};
}

AbsorptionResult absorption_time_minimized(const AbsorptionCurve& curve,
                                           std::optional<double> start) {
  const double horizon = curve.horizon();
  if (!std::isfinite(horizon)) {
    throw HorizonExceeded("no absorption without trapping (Gamma = 0)");
  }
  auto cost = [&curve](double t) {
    if (t < 0.0) return 0.25 - t;
    const double miss = 0.5 - curve(t);
    return miss * miss;
  };

  double x0 = start.value_or(0.0);
  if (!start) {
    double best = std::numeric_limits<double>::infinity();
    for (double t = horizon; t > 1e-3; t *= 0.5) {
      if (const double c = cost(t); c < best) {
        best = c;
        x0 = t;
      }
    }
  }
  if (curve(horizon) < 0.5) {
    throw HorizonExceeded("P_A stays below 1/2 up to t = " + std::to_string(horizon));
  }

  struct Context {
    decltype(cost)* fn;
  } context{&cost};
  gsl_multimin_function objective;
  objective.n = 1;
  objective.params = &context;
  objective.f = [](const gsl_vector* x, void* params) {
    return (*static_cast<Context*>(params)->fn)(gsl_vector_get(x, 0));
  };

  gsl_vector* x = gsl_vector_alloc(1);
  gsl_vector* step = gsl_vector_alloc(1);
  gsl_vector_set(x, 0, x0);
  gsl_vector_set(step, 0, std::max(0.25 * x0, 1e-3));
  gsl_multimin_fminimizer* solver =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 1);
  gsl_multimin_fminimizer_set(solver, &objective, x, step);

  int status = GSL_CONTINUE;
  for (int iter = 0; iter < 5000 && status == GSL_CONTINUE; ++iter) {
    if (gsl_multimin_fminimizer_iterate(solver) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver), 1e-11);
  }
  const double tau = gsl_vector_get(gsl_multimin_fminimizer_x(solver), 0);
  gsl_multimin_fminimizer_free(solver);
  gsl_vector_free(step);
  gsl_vector_free(x);

  return {tau, std::abs(curve(tau) - 0.5) < 1e-6, TauMethod::MinimizedCost};
}

AbsorptionResult absorption_time(const ObservableSeries& series) {
  for (std::size_t i = 1; i < series.times.size(); ++i) {
    const double p0 = series.absorbed[i - 1];
    const double p1 = series.absorbed[i];
    if (p0 < 0.5 && p1 >= 0.5) {
      const double t0 = series.times[i - 1];
      const double t1 = series.times[i];
      return {t0 + (0.5 - p0) / (p1 - p0) * (t1 - t0), true, TauMethod::Interpolated};
    }
  }
  return {0.0, false, TauMethod::Interpolated};
}

AbsorptionResult absorption_time(const NetworkSpec& spec, double dephasing, Engine engine) {
  return absorption_time(absorption_curve(spec, dephasing, engine));
}

double optimal_defect(int branches, double hopping) {
  if (branches < 1) throw InvalidSpec("number of branches must be >= 1");
  return std::sqrt(static_cast<double>(branches - 1)) * hopping;
}

Speedup speedup(const NetworkSpec& spec, double dephasing, Engine engine) {
  Speedup result;
  result.tau_optimal =
      absorption_time(spec.with_defect(optimal_defect(spec.branches, spec.hopping)), dephasing,
                      engine)
          .tau;
  result.tau_reference = absorption_time(spec.with_defect(0.0), dephasing, engine).tau;
  result.value = 1.0 - result.tau_optimal / result.tau_reference;
  return result;
}

double critical_length(int branches) {
  if (branches <= 1) throw InvalidSpec("critical length needs N >= 2");
  return 12.5 / std::log(static_cast<double>(branches));
}

}  // namespace trapnet
