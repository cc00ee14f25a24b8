#include "trapnet/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "trapnet/classical.hpp"
#include "trapnet/config.hpp"
#include "trapnet/errors.hpp"
#include "trapnet/observables.hpp"

namespace trapnet {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

unsigned worker_count(unsigned requested, std::size_t tasks) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

// Evaluates fn(i) for i in [0, count) on a small pool. Each index writes only
// its own slot, so results come back in index order.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers = worker_count(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

int as_count(double value, const std::string& name) {
  const double rounded = std::round(value);
  if (std::abs(value - rounded) > 1e-9) throw InvalidSpec(name + " must be an integer");
  return static_cast<int>(rounded);
}

void apply(const std::string& parameter, double value, NetworkSpec& spec, double& dephasing) {
  if (parameter == "delta") {
    spec.defect = value;
  } else if (parameter == "gamma") {
    dephasing = value;
  } else if (parameter == "N") {
    spec.branches = as_count(value, "N");
  } else if (parameter == "L") {
    spec.length = as_count(value, "L");
  } else if (parameter == "J") {
    spec.hopping = value;
  } else if (parameter == "gamma_trap") {
    spec.trap_rate = value;
  } else {
    throw InvalidSpec("unknown sweep parameter '" + parameter + "'");
  }
}

ResultRow describe(const NetworkSpec& spec, double dephasing, Engine engine) {
  ResultRow row;
  row.kind = spec.kind;
  row.N = spec.branches;
  row.L = spec.length;
  row.J = spec.hopping;
  row.delta = spec.defect;
  row.gamma = dephasing;
  row.gamma_trap = spec.trap_rate;
  row.engine = engine;
  row.tau = kNaN;
  return row;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string trimmed(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  const auto last = s.find_last_not_of(" \t\r");
  return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
}

std::string format_optional(double value) {
  return std::isfinite(value) ? format_double(value) : std::string{};
}

}  // namespace

double SweepResult::max_audit_difference() const {
  double worst = 0.0;
  for (const auto& entry : audit) worst = std::max(worst, entry.difference);
  return worst;
}

void validate(const SweepJob& job) {
  if (job.axes.empty()) throw InvalidSpec("sweep needs at least one axis");
  NetworkSpec spec = job.base;
  double dephasing = job.dephasing;
  for (const auto& axis : job.axes) {
    if (axis.values.empty()) throw InvalidSpec("axis '" + axis.parameter + "' has no values");
    apply(axis.parameter, axis.values.front(), spec, dephasing);
  }
  if (job.audit_samples < 0) throw InvalidSpec("audit sample count must be non-negative");
}

SweepResult run_sweep(const SweepJob& job) {
  validate(job);

  std::size_t total = 1;
  for (const auto& axis : job.axes) total *= axis.values.size();

  std::vector<NetworkSpec> specs(total, job.base);
  std::vector<double> dephasing(total, job.dephasing);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (auto axis = job.axes.rbegin(); axis != job.axes.rend(); ++axis) {
      const std::size_t k = rest % axis->values.size();
      rest /= axis->values.size();
      apply(axis->parameter, axis->values[k], specs[i], dephasing[i]);
    }
  }

  SweepResult result;
  result.rows.resize(total);
  parallel_for(total, job.threads, [&](std::size_t i) {
    ResultRow& row = result.rows[i];
    try {
      specs[i].validate();
      row = describe(specs[i], dephasing[i], resolve_engine(job.engine, specs[i].kind));
      const AbsorptionResult tau = absorption_time(specs[i], dephasing[i], job.engine);
      row.tau = tau.tau;
      row.converged = tau.converged;
      if (job.with_speedup) row.speedup = speedup(specs[i], dephasing[i], job.engine).value;
    } catch (const std::exception& e) {
      row = describe(specs[i], dephasing[i], job.engine);
      row.error = e.what();
      row.converged = false;
    }
  });

  // Cross-check a spread subsample of reduced-engine rows against the full
  // Liouvillian.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < total; ++i) {
    const ResultRow& row = result.rows[i];
    if (row.converged && row.engine == Engine::Reduced &&
        specs[i].total_sites() <= kAuditSiteLimit) {
      candidates.push_back(i);
    }
  }
  const std::size_t picks =
      std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(job.audit_samples));
  result.audit.resize(picks);
  parallel_for(picks, job.threads, [&](std::size_t k) {
    const std::size_t index = candidates[picks == 1 ? 0 : k * (candidates.size() - 1) / (picks - 1)];
    AuditEntry& entry = result.audit[k];
    entry.row = index;
    try {
      entry.tau_reference = absorption_time(specs[index], dephasing[index], Engine::FullFLS).tau;
      entry.difference = std::abs(result.rows[index].tau - entry.tau_reference);
    } catch (const std::exception&) {
      entry.tau_reference = kNaN;
      entry.difference = std::numeric_limits<double>::infinity();
    }
  });
  return result;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "kind,N,L,J,delta,gamma,gamma_trap,tau,speedup,engine,converged\n";
  for (const auto& row : rows) {
    out << to_string(row.kind) << ',' << row.N << ',' << row.L << ',' << format_double(row.J)
        << ',' << format_double(row.delta) << ',' << format_double(row.gamma) << ','
        << format_double(row.gamma_trap) << ',' << format_optional(row.tau) << ','
        << (row.speedup ? format_optional(*row.speedup) : std::string{}) << ','
        << to_string(row.engine) << ',' << (row.converged ? "true" : "false") << '\n';
  }
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_results_csv(out, rows);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      trimmed(line) != "kind,N,L,J,delta,gamma,gamma_trap,tau,speedup,engine,converged") {
    throw ConfigError("unexpected results header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (trimmed(line).empty()) continue;
    const auto f = split(trimmed(line), ',');
    if (f.size() != 11) throw ConfigError("malformed results row: " + line);
    ResultRow row;
    row.kind = parse_topology(f[0]);
    row.N = parse_int(f[1], "N");
    row.L = parse_int(f[2], "L");
    row.J = parse_double(f[3], "J");
    row.delta = parse_double(f[4], "delta");
    row.gamma = parse_double(f[5], "gamma");
    row.gamma_trap = parse_double(f[6], "gamma_trap");
    row.tau = f[7].empty() ? kNaN : parse_double(f[7], "tau");
    if (!f[8].empty()) row.speedup = parse_double(f[8], "speedup");
    row.engine = parse_engine(f[9]);
    row.converged = f[10] == "true";
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<HeatmapCell> heatmap_speedup(const HeatmapGrid& grid, double dephasing) {
  std::vector<HeatmapCell> cells;
  for (const int n : grid.branches) {
    for (const int l : grid.lengths) cells.push_back({.N = n, .L = l});
  }
  parallel_for(cells.size(), grid.threads, [&](std::size_t i) {
    HeatmapCell& cell = cells[i];
    NetworkSpec spec = grid.base;
    spec.branches = cell.N;
    spec.length = cell.L;
    try {
      const Speedup s = speedup(spec, dephasing, grid.engine);
      cell.speedup = s.value;
      cell.tau_optimal = s.tau_optimal;
      cell.tau_reference = s.tau_reference;
    } catch (const std::exception&) {
      cell.speedup = kNaN;
      cell.diverged = true;
    }
  });
  return cells;
}

std::vector<ResultRow> to_rows(const HeatmapGrid& grid, double dephasing,
                               const std::vector<HeatmapCell>& cells) {
  std::vector<ResultRow> rows;
  rows.reserve(cells.size());
  for (const auto& cell : cells) {
    NetworkSpec spec = grid.base;
    spec.branches = cell.N;
    spec.length = cell.L;
    spec.defect = optimal_defect(cell.N, spec.hopping);
    ResultRow row = describe(spec, dephasing, resolve_engine(grid.engine, spec.kind));
    row.tau = cell.diverged ? kNaN : cell.tau_optimal;
    row.speedup = cell.speedup;
    row.converged = !cell.diverged;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ClassicalRow> classical_comparison(const NetworkSpec& spec,
                                               const std::vector<double>& dephasing,
                                               Engine engine, unsigned threads) {
  spec.validate();
  std::vector<ClassicalRow> rows(dephasing.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    ClassicalRow& row = rows[i];
    const double gamma = dephasing[i];
    row.gamma = gamma;
    try {
      row.tau_quantum = absorption_time(spec, gamma, engine).tau;
    } catch (const Error&) {
      row.tau_quantum = kNaN;
    }
    const RateModel model = build_rate_model(spec, gamma);
    row.tau_closed_form = spec.length >= 2 ? mfpt_closed_form(spec, gamma).absorption_time : kNaN;
    row.tau_inverse = std::numbers::ln2 * mfpt_via_inverse(model).linear_solve;
    row.tau_wtd = std::numbers::ln2 * mfpt_via_wtd(model).exact;
  });
  return rows;
}

void write_classical_csv(std::ostream& out, const std::vector<ClassicalRow>& rows) {
  out << "gamma,tau_quantum,tau_closed_form,tau_inverse,tau_wtd\n";
  for (const auto& row : rows) {
    out << format_double(row.gamma) << ',' << format_optional(row.tau_quantum) << ','
        << format_optional(row.tau_closed_form) << ',' << format_optional(row.tau_inverse) << ','
        << format_optional(row.tau_wtd) << '\n';
  }
}

std::vector<double> parse_value_list(const std::string& text) {
  const std::string spec = trimmed(text);
  if (spec.empty()) throw ConfigError("empty value list");
  std::vector<double> values;
  if (spec.starts_with("log:")) {
    const auto f = split(spec.substr(4), ':');
    if (f.size() != 3) throw ConfigError("expected log:start:stop:count, got '" + text + "'");
    const double a = parse_double(f[0], "start");
    const double b = parse_double(f[1], "stop");
    const int n = parse_int(f[2], "count");
    if (!(a > 0.0 && b > 0.0) || n < 1) throw ConfigError("invalid log range '" + text + "'");
    for (int i = 0; i < n; ++i) {
      const double frac = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      values.push_back(a * std::pow(b / a, frac));
    }
    return values;
  }
  if (spec.find(':') != std::string::npos) {
    const auto f = split(spec, ':');
    if (f.size() != 3) throw ConfigError("expected start:stop:step, got '" + text + "'");
    const double a = parse_double(f[0], "start");
    const double b = parse_double(f[1], "stop");
    const double step = parse_double(f[2], "step");
    if (!(step > 0.0) || b < a) throw ConfigError("invalid range '" + text + "'");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) values.push_back(a + static_cast<double>(i) * step);
    return values;
  }
  for (const auto& item : split(spec, ',')) {
    values.push_back(parse_double(trimmed(item), "value list"));
  }
  return values;
}

}  // namespace trapnet
