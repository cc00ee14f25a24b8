#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "trapnet/errors.hpp"
#include "trapnet/observables.hpp"
#include "trapnet/scan.hpp"

using namespace trapnet;

namespace {

SweepJob small_job() {
  SweepJob job;
  job.base.branches = 3;
  job.base.length = 2;
  job.base.trap_rate = 0.2;
  job.dephasing = 0.05;
  job.axes = {{"L", {1, 2}}, {"delta", {0.0, 0.5, 1.0, 1.5}}};
  return job;
}

std::string csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows);
  return out.str();
}

}  // namespace

TEST(ValueList, Forms) {
  EXPECT_EQ(parse_value_list("1,2.5, 4"), (std::vector<double>{1.0, 2.5, 4.0}));
  const auto range = parse_value_list("0:4:0.05");
  ASSERT_EQ(range.size(), 81u);
  EXPECT_NEAR(range[40], 2.0, 1e-12);
  EXPECT_NEAR(range.back(), 4.0, 1e-12);
  const auto logs = parse_value_list("log:0.01:100:5");
  ASSERT_EQ(logs.size(), 5u);
  EXPECT_NEAR(logs[2], 1.0, 1e-12);
  EXPECT_THROW((void)parse_value_list("1:0:0.1"), ConfigError);
  EXPECT_THROW((void)parse_value_list("log:0:1:3"), ConfigError);
  EXPECT_THROW((void)parse_value_list(""), ConfigError);
}

TEST(RunSweep, RowsFollowAxisOrder) {
  const SweepResult result = run_sweep(small_job());
  ASSERT_EQ(result.rows.size(), 8u);
  EXPECT_EQ(result.rows[0].L, 1);
  EXPECT_EQ(result.rows[3].L, 1);
  EXPECT_EQ(result.rows[4].L, 2);
  EXPECT_DOUBLE_EQ(result.rows[5].delta, 0.5);
  for (const auto& row : result.rows) {
    EXPECT_TRUE(row.converged);
    EXPECT_GT(row.tau, 0.0);
    EXPECT_EQ(row.engine, Engine::Reduced);
    EXPECT_FALSE(row.speedup.has_value());
  }
  const NetworkSpec probe = [] {
    NetworkSpec s = small_job().base;
    s.length = 2;
    s.defect = 1.0;
    return s;
  }();
  EXPECT_DOUBLE_EQ(result.rows[6].tau, absorption_time(probe, 0.05).tau);
}

TEST(RunSweep, DeterministicAcrossThreadCounts) {
  SweepJob job = small_job();
  job.threads = 1;
  const std::string serial = csv(run_sweep(job).rows);
  job.threads = 4;
  EXPECT_EQ(csv(run_sweep(job).rows), serial);
  EXPECT_EQ(csv(run_sweep(job).rows), serial);
}

TEST(RunSweep, AuditAgreesWithFullLiouvillian) {
  SweepJob job = small_job();
  job.axes = {{"delta", {0.0, 0.3, 0.6, 0.9, 1.2, 1.5, 1.8, 2.1, 2.4, 2.7, 3.0, 3.3}}};
  const SweepResult result = run_sweep(job);
  EXPECT_EQ(result.audit.size(), 10u);
  EXPECT_LT(result.max_audit_difference(), 1e-6);
  EXPECT_EQ(result.audit.front().row, 0u);
  EXPECT_EQ(result.audit.back().row, 11u);
}

TEST(RunSweep, FailuresStayOnTheirRow) {
  SweepJob job = small_job();
  job.axes = {{"gamma_trap", {0.2, 0.0, 0.3}}};
  const SweepResult result = run_sweep(job);
  ASSERT_EQ(result.rows.size(), 3u);
  EXPECT_TRUE(result.rows[0].converged);
  EXPECT_FALSE(result.rows[1].converged);
  EXPECT_TRUE(std::isnan(result.rows[1].tau));
  EXPECT_FALSE(result.rows[1].error.empty());
  EXPECT_TRUE(result.rows[2].converged);
}

TEST(RunSweep, RejectsBadJobs) {
  SweepJob job = small_job();
  job.axes.clear();
  EXPECT_THROW((void)run_sweep(job), InvalidSpec);
  job.axes = {{"temperature", {1.0}}};
  EXPECT_THROW((void)run_sweep(job), InvalidSpec);
  job.axes = {{"delta", {}}};
  EXPECT_THROW((void)run_sweep(job), InvalidSpec);
}

TEST(RunSweep, SpeedupColumn) {
  SweepJob job = small_job();
  job.axes = {{"gamma", {0.0, 0.5}}};
  job.with_speedup = true;
  const SweepResult result = run_sweep(job);
  for (const auto& row : result.rows) {
    ASSERT_TRUE(row.speedup.has_value());
    NetworkSpec spec = job.base;
    EXPECT_DOUBLE_EQ(*row.speedup, speedup(spec, row.gamma).value);
  }
}

TEST(ResultsCsv, HeaderAndRoundTrip) {
  SweepJob job = small_job();
  job.axes = {{"delta", {0.25, 2.0}}};
  job.with_speedup = true;
  const auto rows = run_sweep(job).rows;
  const std::string text = csv(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "kind,N,L,J,delta,gamma,gamma_trap,tau,speedup,engine,converged");
  std::istringstream in(text);
  const auto back = read_results_csv(in);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].tau, rows[i].tau);
    EXPECT_EQ(back[i].delta, rows[i].delta);
    EXPECT_EQ(back[i].speedup, rows[i].speedup);
    EXPECT_EQ(back[i].engine, rows[i].engine);
  }
  EXPECT_EQ(csv(back), text);
}

TEST(ResultsCsv, UnwritablePath) {
  EXPECT_THROW(write_results_csv(std::string("/nonexistent/dir/out.csv"), {}), std::runtime_error);
}

TEST(Heatmap, CellsAndFlags) {
  HeatmapGrid grid;
  grid.base.trap_rate = 0.1;
  grid.branches = {3, 4};
  grid.lengths = {2, 3};
  const auto cells = heatmap_speedup(grid, 0.0);
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[1].N, 3);
  EXPECT_EQ(cells[1].L, 3);
  for (const auto& cell : cells) {
    EXPECT_FALSE(cell.diverged);
    EXPECT_DOUBLE_EQ(cell.speedup, 1.0 - cell.tau_optimal / cell.tau_reference);
  }
  grid.base.trap_rate = 0.0;
  for (const auto& cell : heatmap_speedup(grid, 0.0)) EXPECT_TRUE(cell.diverged);
  const auto rows = to_rows(grid, 0.0, heatmap_speedup(grid, 0.0));
  EXPECT_FALSE(rows.front().converged);
}

TEST(ClassicalComparison, Columns) {
  NetworkSpec spec;
  spec.branches = 5;
  spec.length = 4;
  spec.defect = 2.0;
  spec.trap_rate = 0.1;
  const auto rows = classical_comparison(spec, {1.0, 10.0});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0].tau_closed_form, std::log(2.0) * 217.1, 1e-10);
  EXPECT_NEAR(rows[0].tau_inverse / rows[0].tau_closed_form, 1.0, 1e-10);
  EXPECT_NEAR(rows[0].tau_wtd / rows[0].tau_closed_form, 1.0, 1e-10);
  std::ostringstream out;
  write_classical_csv(out, rows);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "gamma,tau_quantum,tau_closed_form,tau_inverse,tau_wtd");
}
