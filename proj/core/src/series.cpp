#include "trapnet/series.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "trapnet/config.hpp"
#include "trapnet/errors.hpp"

namespace trapnet {

std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::FullFLS:
      return "full";
    case Engine::Reduced:
      return "reduced";
    case Engine::Classical:
      return "classical";
    case Engine::Auto:
      return "auto";
  }
  return "unknown";
}

Engine parse_engine(std::string_view text) {
  if (text == "full" || text == "fls" || text == "FullFLS") return Engine::FullFLS;
  if (text == "reduced" || text == "Reduced") return Engine::Reduced;
  if (text == "classical" || text == "Classical") return Engine::Classical;
  if (text == "auto" || text == "Auto") return Engine::Auto;
  throw InvalidSpec("unknown engine '" + std::string(text) + "'");
}

Engine resolve_engine(Engine engine, Topology kind) {
  if (engine != Engine::Auto) return engine;
  return kind == Topology::ExtendedStar ? Engine::Reduced : Engine::FullFLS;
}

double ObservableSeries::monotonicity_violation() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < absorbed.size(); ++i) {
    worst = std::max(worst, absorbed[i - 1] - absorbed[i]);
  }
  return worst;
}

std::vector<double> uniform_grid(double tmax, int points) {
  if (points < 2 || !(tmax > 0.0)) throw InvalidSpec("time grid needs >= 2 points and tmax > 0");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = tmax * static_cast<double>(i) / (points - 1);
  return grid;
}

std::vector<double> default_time_grid(const NetworkSpec& spec) {
  const double tmax = spec.trap_rate > 0.0 ? 10.0 * spec.total_sites() / spec.trap_rate
                                           : 1000.0 / spec.hopping;
  return uniform_grid(tmax, 2000);
}

double clamp_probability(double p) {
  constexpr double slack = 1e-10;
  if (p < 0.0 && p >= -slack) return 0.0;
  if (p > 1.0 && p <= 1.0 + slack) return 1.0;
  return p;
}

void write_series_csv(std::ostream& out, const ObservableSeries& series) {
  out << "time,p_absorbed\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out << format_double(series.times[i]) << ',' << format_double(series.absorbed[i]) << '\n';
  }
}

}  // namespace trapnet
