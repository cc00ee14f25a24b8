// Command line front end: single-point curves, parameter sweeps, speedup
// heatmaps, classical-limit comparisons and the invariant suite.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "trapnet/classical.hpp"
#include "trapnet/config.hpp"
#include "trapnet/errors.hpp"
#include "trapnet/invariants.hpp"
#include "trapnet/liouville.hpp"
#include "trapnet/observables.hpp"
#include "trapnet/scan.hpp"

namespace {

using namespace trapnet;

struct PointOptions {
  std::string config;
  std::string kind;
  std::optional<int> branches;
  std::optional<int> length;
  std::optional<double> hopping;
  std::optional<double> defect;
  std::optional<double> dephasing;
  std::optional<double> trap_rate;
  std::string engine = "auto";
  std::string out;
  unsigned threads = 0;
};

void add_point_flags(CLI::App& cmd, PointOptions& o) {
  cmd.add_option("--config", o.config, "Key-value file with kind, N, L, J, delta, gamma, gamma_trap");
  cmd.add_option("--kind", o.kind, "star or chain");
  cmd.add_option("--N", o.branches, "Number of branches");
  cmd.add_option("--L", o.length, "Sites per branch");
  cmd.add_option("--J", o.hopping, "Hopping amplitude");
  cmd.add_option("--delta", o.defect, "Energy defect of the input sites");
  cmd.add_option("--gamma", o.dephasing, "Pure dephasing rate");
  cmd.add_option("--gamma-trap", o.trap_rate, "Trapping rate of the core");
  cmd.add_option("--engine", o.engine, "full, reduced, classical or auto");
  cmd.add_option("--out", o.out, "Output CSV (stdout when omitted)");
}

void add_thread_flag(CLI::App& cmd, PointOptions& o) {
  cmd.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

struct Point {
  NetworkSpec spec;
  double dephasing = 0.0;
  Engine engine = Engine::Auto;
};

// Config file first, explicit flags on top.
Point resolve(const PointOptions& o) {
  Point p;
  if (!o.config.empty()) {
    const KeyValues values = read_key_values(o.config);
    p.spec = spec_from_config(values);
    if (auto it = values.find("gamma"); it != values.end()) {
      p.dephasing = parse_double(it->second, "gamma");
    }
  }
  if (!o.kind.empty()) p.spec.kind = parse_topology(o.kind);
  if (o.branches) p.spec.branches = *o.branches;
  if (o.length) p.spec.length = *o.length;
  if (o.hopping) p.spec.hopping = *o.hopping;
  if (o.defect) p.spec.defect = *o.defect;
  if (o.trap_rate) p.spec.trap_rate = *o.trap_rate;
  if (o.dephasing) p.dephasing = *o.dephasing;
  p.engine = parse_engine(o.engine);
  p.spec.validate();
  return p;
}

template <class Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  if (!out.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

void report_sweep(const SweepResult& result) {
  long failed = 0;
  for (const auto& row : result.rows) {
    if (!row.converged) {
      ++failed;
      std::cerr << "point failed: N=" << row.N << " L=" << row.L << " delta=" << row.delta
                << " gamma=" << row.gamma << ": " << row.error << '\n';
    }
  }
  std::cerr << result.rows.size() << " points, " << failed << " not converged";
  if (!result.audit.empty()) {
    std::cerr << ", audit of " << result.audit.size()
              << " points vs full Liouvillian: max |dtau| = " << result.max_audit_difference();
  }
  std::cerr << '\n';
}

int run_sweep_command(const PointOptions& o, std::vector<SweepAxis> axes, bool with_speedup) {
  const Point p = resolve(o);
  SweepJob job;
  job.base = p.spec;
  job.dephasing = p.dephasing;
  job.engine = p.engine;
  job.axes = std::move(axes);
  job.with_speedup = with_speedup;
  job.threads = o.threads;
  const SweepResult result = run_sweep(job);
  emit(o.out, [&](std::ostream& out) { write_results_csv(out, result.rows); });
  report_sweep(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exciton trapping on extended stars and asymmetric chains under dephasing"};
  app.require_subcommand(1);

  // simulate
  PointOptions sim;
  std::optional<double> tmax;
  int points = 2000;
  std::string spectrum_path;
  auto* simulate = app.add_subcommand("simulate", "Dump P_A(t) for one parameter point");
  add_point_flags(*simulate, sim);
  simulate->add_option("--tmax", tmax, "Final time (default 10 N_S / gamma_trap)");
  simulate->add_option("--points", points, "Number of uniform time points")->check(CLI::PositiveNumber);
  simulate->add_option("--spectrum", spectrum_path, "Also write the Liouvillian spectrum CSV");

  // sweep-delta
  PointOptions sd;
  std::string delta_values = "0:4:0.05";
  std::string sd_lengths;
  auto* sweep_delta = app.add_subcommand("sweep-delta", "Absorption time versus the energy defect");
  add_point_flags(*sweep_delta, sd);
  add_thread_flag(*sweep_delta, sd);
  sweep_delta->add_option("--values", delta_values, "Delta values: a,b,c | start:stop:step | log:a:b:n");
  sweep_delta->add_option("--L-values", sd_lengths, "Optional outer sweep over L");

  // sweep-gamma
  PointOptions sg;
  std::string gamma_values = "log:0.01:10:25";
  bool sg_speedup = false;
  auto* sweep_gamma = app.add_subcommand("sweep-gamma", "Absorption time versus the dephasing rate");
  add_point_flags(*sweep_gamma, sg);
  add_thread_flag(*sweep_gamma, sg);
  sweep_gamma->add_option("--values", gamma_values, "gamma values: a,b,c | start:stop:step | log:a:b:n");
  sweep_gamma->add_flag("--speedup", sg_speedup, "Also compute S(gamma) per point");

  // heatmap
  PointOptions hm;
  std::string hm_branches = "3:10:1";
  std::string hm_lengths = "2:14:1";
  auto* heatmap = app.add_subcommand("heatmap", "Speedup S(gamma) over an (N, L) grid");
  add_point_flags(*heatmap, hm);
  add_thread_flag(*heatmap, hm);
  heatmap->add_option("--N-values", hm_branches, "Branch counts");
  heatmap->add_option("--L-values", hm_lengths, "Branch lengths");

  // classical-mfpt
  PointOptions cm;
  std::string cm_values = "log:0.01:100:30";
  auto* classical = app.add_subcommand("classical-mfpt",
                                       "Quantum absorption time against the classical rate limit");
  add_point_flags(*classical, cm);
  add_thread_flag(*classical, cm);
  classical->add_option("--values", cm_values, "gamma values");

  // validate
  int draws = 20;
  std::uint64_t seed = 20240611;
  int validate_points = 120;
  auto* validate_cmd = app.add_subcommand("validate", "Run the randomized invariant suite");
  validate_cmd->add_option("--draws", draws, "Random parameter points")->check(CLI::PositiveNumber);
  validate_cmd->add_option("--seed", seed, "Generator seed");
  validate_cmd->add_option("--points", validate_points, "Time points per trajectory")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const Point p = resolve(sim);
      const AbsorptionCurve curve = absorption_curve(p.spec, p.dephasing, p.engine);
      const double t_end = tmax.value_or(
          p.spec.trap_rate > 0.0 ? 10.0 * p.spec.total_sites() / p.spec.trap_rate : 1000.0);
      const auto times = uniform_grid(t_end, points);
      const ObservableSeries series = sample(curve, times, p.spec, p.dephasing);
      emit(sim.out, [&](std::ostream& out) { write_series_csv(out, series); });
      if (!spectrum_path.empty()) {
        const Propagator propagator =
            diagonalize(build_liouvillian(build_hamiltonian(p.spec), p.dephasing));
        emit(spectrum_path, [&](std::ostream& out) { write_spectrum_csv(out, propagator); });
      }
      try {
        const AbsorptionResult tau = absorption_time(curve);
        std::cerr << "tau = " << format_double(tau.tau) << " (engine " << to_string(curve.engine())
                  << ")\n";
      } catch (const HorizonExceeded& e) {
        std::cerr << "tau not reached: " << e.what() << '\n';
      }
      return 0;
    }
    if (*sweep_delta) {
      std::vector<SweepAxis> axes;
      if (!sd_lengths.empty()) axes.push_back({"L", parse_value_list(sd_lengths)});
      axes.push_back({"delta", parse_value_list(delta_values)});
      return run_sweep_command(sd, std::move(axes), false);
    }
    if (*sweep_gamma) {
      return run_sweep_command(sg, {{"gamma", parse_value_list(gamma_values)}}, sg_speedup);
    }
    if (*heatmap) {
      const Point p = resolve(hm);
      HeatmapGrid grid;
      grid.base = p.spec;
      grid.engine = p.engine;
      grid.threads = hm.threads;
      for (const double n : parse_value_list(hm_branches)) grid.branches.push_back(static_cast<int>(n));
      for (const double l : parse_value_list(hm_lengths)) grid.lengths.push_back(static_cast<int>(l));
      const auto cells = heatmap_speedup(grid, p.dephasing);
      const auto rows = to_rows(grid, p.dephasing, cells);
      emit(hm.out, [&](std::ostream& out) { write_results_csv(out, rows); });
      return 0;
    }
    if (*classical) {
      const Point p = resolve(cm);
      const auto rows = classical_comparison(p.spec, parse_value_list(cm_values), p.engine, cm.threads);
      emit(cm.out, [&](std::ostream& out) { write_classical_csv(out, rows); });
      return 0;
    }
    if (*validate_cmd) {
      const InvariantReport report =
          run_invariant_suite(random_draws(draws, seed), validate_points);
      for (const auto& check : report.checks) {
        std::printf("%-20s %s  checks=%ld violations=%ld worst=%.3e\n", check.name.c_str(),
                    check.passed() ? "ok  " : "FAIL", check.checks, check.violations, check.worst);
        if (!check.passed()) std::printf("  first failure: %s\n", check.first_failure.c_str());
      }
      return report.passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
