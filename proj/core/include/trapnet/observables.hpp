#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "trapnet/network.hpp"
#include "trapnet/series.hpp"

namespace trapnet {

/// Continuous-time evaluator of the absorbed population P_A(t) for one
/// parameter point. Copies share the underlying decomposition.
class AbsorptionCurve {
 public:
  using Evaluator = std::function<double(double)>;

  AbsorptionCurve(Evaluator evaluator, double horizon, Engine engine);

  [[nodiscard]] double operator()(double t) const { return evaluator_(t); }
  /// Latest time the absorption-time solvers may search up to.
  [[nodiscard]] double horizon() const { return horizon_; }
  [[nodiscard]] Engine engine() const { return engine_; }

 private:
  Evaluator evaluator_;
  double horizon_;
  Engine engine_;
};

/// 100 N_S / Gamma (infinite when Gamma = 0).
[[nodiscard]] double absorption_horizon(const NetworkSpec& spec);

/// Builds P_A(t) through the requested engine. Reduced requires a star,
/// Classical requires gamma > 0. Near-defective generators fall back to
/// adaptive time stepping.
[[nodiscard]] AbsorptionCurve absorption_curve(const NetworkSpec& spec, double dephasing,
                                               Engine engine = Engine::Auto);

/// P_A(t_i) = 1 - Tr rho(t_i).
[[nodiscard]] ObservableSeries absorption_probability(const std::vector<DensityMatrix>& states,
                                                      std::span<const double> times,
                                                      double dephasing);

[[nodiscard]] ObservableSeries sample(const AbsorptionCurve& curve, std::span<const double> times,
                                      const NetworkSpec& spec, double dephasing);

enum class TauMethod { Bracketed, MinimizedCost, Interpolated };

struct AbsorptionResult {
  double tau = 0.0;  // 1/J
  bool converged = false;
  TauMethod method = TauMethod::Bracketed;
};

/// Time at which P_A reaches one half, by bisection on the monotone curve
/// (bracket width 1e-8). Throws HorizonExceeded if P_A(horizon) < 1/2.
[[nodiscard]] AbsorptionResult absorption_time(const AbsorptionCurve& curve);

/// Same target found by Nelder-Mead minimization of C(t) = (1/2 - P_A(t))^2.
/// Without a start point the search begins at the best point of a
/// geometric grid below the horizon.
[[nodiscard]] AbsorptionResult absorption_time_minimized(const AbsorptionCurve& curve,
                                                         std::optional<double> start = {});

/// Linear interpolation of the first crossing of 1/2 in a sampled series;
/// converged is false when the series never reaches it.
[[nodiscard]] AbsorptionResult absorption_time(const ObservableSeries& series);

[[nodiscard]] AbsorptionResult absorption_time(const NetworkSpec& spec, double dephasing,
                                               Engine engine = Engine::Auto);

/// sqrt(N - 1) J
[[nodiscard]] double optimal_defect(int branches, double hopping = 1.0);

struct Speedup {
  double value = 0.0;          // 1 - tau(Delta_opt) / tau(Delta = 0)
  double tau_optimal = 0.0;
  double tau_reference = 0.0;
};

/// S(gamma); the Delta of `spec` is ignored. Propagates HorizonExceeded.
[[nodiscard]] Speedup speedup(const NetworkSpec& spec, double dephasing,
                              Engine engine = Engine::Auto);

/// Empirical speedup boundary L* = 12.5 / ln N (N >= 2).
[[nodiscard]] double critical_length(int branches);

}  // namespace trapnet
