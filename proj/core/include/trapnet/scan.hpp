#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trapnet/network.hpp"
#include "trapnet/series.hpp"

namespace trapnet {

/// One swept parameter. Recognised names: delta, gamma, N, L, J, gamma_trap.
struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
};

struct SweepJob {
  NetworkSpec base;
  double dephasing = 0.0;
  std::vector<SweepAxis> axes;
  Engine engine = Engine::Auto;
  /// Also evaluate S(gamma) for every point (ignores the point's Delta).
  bool with_speedup = false;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Size of the reduced-versus-full cross-check subsample (0 disables it).
  int audit_samples = 10;
};

struct ResultRow {
  Topology kind = Topology::ExtendedStar;
  int N = 0;
  int L = 0;
  double J = 1.0;
  double delta = 0.0;
  double gamma = 0.0;
  double gamma_trap = 0.0;
  double tau = 0.0;
  std::optional<double> speedup;
  Engine engine = Engine::Auto;
  bool converged = false;
  /// Reason for a failed point; not part of the CSV.
  std::string error;
};

struct AuditEntry {
  std::size_t row = 0;
  double tau_reference = 0.0;  // FullFLS
  double difference = 0.0;     // |tau_row - tau_reference|
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<AuditEntry> audit;

  [[nodiscard]] double max_audit_difference() const;
};

/// Throws InvalidSpec for an empty or unknown axis.
void validate(const SweepJob& job);

/// Cartesian product of the axes, first axis slowest. Points are evaluated
/// concurrently; failures are captured per row and never abort the sweep.
/// Row order depends only on the job.
[[nodiscard]] SweepResult run_sweep(const SweepJob& job);

/// Largest network (N_S) the audit will re-run through the full Liouvillian.
inline constexpr int kAuditSiteLimit = 26;

/// Header exactly `kind,N,L,J,delta,gamma,gamma_trap,tau,speedup,engine,converged`.
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Throws std::runtime_error when the file cannot be written.
void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);
[[nodiscard]] std::vector<ResultRow> read_results_csv(std::istream& in);

struct HeatmapGrid {
  NetworkSpec base;  // J, Gamma, eps0 and topology are taken from here
  std::vector<int> branches;
  std::vector<int> lengths;
  Engine engine = Engine::Auto;
  unsigned threads = 0;
};

struct HeatmapCell {
  int N = 0;
  int L = 0;
  double speedup = 0.0;
  double tau_optimal = 0.0;
  double tau_reference = 0.0;
  bool diverged = false;  // either time hit the horizon or failed
};

/// S(gamma) over every (N, L) cell, N slowest.
[[nodiscard]] std::vector<HeatmapCell> heatmap_speedup(const HeatmapGrid& grid, double dephasing);
[[nodiscard]] std::vector<ResultRow> to_rows(const HeatmapGrid& grid, double dephasing,
                                             const std::vector<HeatmapCell>& cells);

/// Classical-limit comparison at one dephasing rate.
struct ClassicalRow {
  double gamma = 0.0;
  double tau_quantum = 0.0;
  double tau_closed_form = 0.0;
  double tau_inverse = 0.0;
  double tau_wtd = 0.0;
};

/// tau from the quantum engine and ln 2 times the three mean first-passage
/// times of the directed chain.
[[nodiscard]] std::vector<ClassicalRow> classical_comparison(const NetworkSpec& spec,
                                                             const std::vector<double>& dephasing,
                                                             Engine engine = Engine::Auto,
                                                             unsigned threads = 0);

/// Header `gamma,tau_quantum,tau_closed_form,tau_inverse,tau_wtd`.
void write_classical_csv(std::ostream& out, const std::vector<ClassicalRow>& rows);

/// Value lists: "a,b,c", "start:stop:step" (inclusive) or "log:start:stop:count".
[[nodiscard]] std::vector<double> parse_value_list(const std::string& text);

}  // namespace trapnet
