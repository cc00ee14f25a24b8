#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "trapnet/network.hpp"

namespace trapnet {

/// Numerical route used to evaluate P_A(t). Auto resolves to Reduced for
/// stars and FullFLS for chains; Classical is only used on request.
enum class Engine { FullFLS, Reduced, Classical, Auto };

std::string_view to_string(Engine engine);
Engine parse_engine(std::string_view text);
Engine resolve_engine(Engine engine, Topology kind);

/// P_A(t) sampled on an ascending time grid for one parameter point.
struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> absorbed;
  NetworkSpec spec;
  double dephasing = 0.0;
  Engine provenance = Engine::FullFLS;

  /// Largest drop absorbed[i] - absorbed[i+1] (0 when non-decreasing).
  [[nodiscard]] double monotonicity_violation() const;
};

/// `points` uniformly spaced values covering [0, tmax] inclusive.
std::vector<double> uniform_grid(double tmax, int points);

/// 2000 points over [0, 10 N_S / Gamma]; falls back to 1000/J when Gamma = 0.
std::vector<double> default_time_grid(const NetworkSpec& spec);

/// Clamps values within 1e-10 of the unit interval onto it; larger excursions
/// pass through untouched so invariant checks can see them.
double clamp_probability(double p);

/// CSV with header `time,p_absorbed`.
void write_series_csv(std::ostream& out, const ObservableSeries& series);

}  // namespace trapnet
