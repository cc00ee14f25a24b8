#include <gtest/gtest.h>

#include "trapnet/invariants.hpp"

using namespace trapnet;

TEST(RandomDraws, ReproducibleAndWithinLimits) {
  DrawLimits limits;
  limits.max_sites = 12;
  const auto a = random_draws(30, 9, limits);
  const auto b = random_draws(30, 9, limits);
  ASSERT_EQ(a.size(), 30u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].spec, b[i].spec);
    EXPECT_LE(a[i].spec.total_sites(), 12);
    EXPECT_GE(a[i].spec.trap_rate, limits.min_trap);
  }
}

TEST(InvariantSuite, CleanOnRandomDraws) {
  const InvariantReport report = run_invariant_suite(random_draws(15, 3), 80);
  ASSERT_EQ(report.checks.size(), 6u);
  for (const auto& check : report.checks) {
    EXPECT_TRUE(check.passed()) << check.name << ": " << check.first_failure;
    EXPECT_GT(check.checks, 0);
  }
  EXPECT_TRUE(report.passed());
}

TEST(InvariantSuite, FlagsViolations) {
  InvariantTolerances strict;
  strict.conjugate_pair = -1.0;  // every comparison now counts as a violation
  const InvariantReport report = run_invariant_suite(random_draws(1, 4), 5, strict);
  EXPECT_FALSE(report.passed());
  EXPECT_GT(report.violations(), 0);
  EXPECT_FALSE(report.checks[5].first_failure.empty());
}
