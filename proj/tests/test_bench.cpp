#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bezgcd/bench.hpp"
#include "bezgcd/errors.hpp"

using namespace bezgcd;

namespace {

std::string body_without_time(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  for (ResultRow r : rows) {
    r.time_s = 0.0;
    const ResultRow one[] = {r};
    write_rows_csv(os, one);
  }
  return os.str();
}

BenchOptions small_options(int jobs) {
  BenchOptions o;
  o.groups = {parse_group("6:2:4:0.01:6"), parse_group("6:3:3:0.01:5")};
  o.seed = 3;
  o.jobs = jobs;
  return o;
}

}  // namespace

TEST(ParseGroup, Valid) {
  const GroupSpec g = parse_group("10:3:10:0.01:100");
  EXPECT_EQ(g.m, 10);
  EXPECT_EQ(g.d, 3);
  EXPECT_EQ(g.n, 10);
  EXPECT_DOUBLE_EQ(g.e, 0.01);
  EXPECT_EQ(g.count, 100);
  EXPECT_EQ(group_label(g), "10:3:10:0.01:100");
}

TEST(ParseGroup, Invalid) {
  for (const char* text : {"10:3:10:0.01", "10:3:10:0.01:100:1", "a:3:10:0.01:100", "10:3:10:x:100",
                           "10:10:10:0.01:100", "10:3:1:0.01:100", "10:3:10:0.01:0", "10:3.5:10:0.01:10"})
    EXPECT_THROW(parse_group(text), InvalidProblem) << text;
}

TEST(Quantile, Interpolates) {
  EXPECT_DOUBLE_EQ(quantile({3, 1, 2}, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, 0.9), 10.0);
  EXPECT_TRUE(std::isnan(quantile({}, 0.5)));
}

TEST(Summarize, UsesConvergedRowsForMeans) {
  GroupSpec spec;
  std::vector<ResultRow> rows(3);
  rows[0].status = RowStatus::Converged;
  rows[0].iterations = 2;
  rows[0].time_s = 3.0;
  rows[0].perturbation = 0.1;
  rows[0].remainder_norm = 1e-9;
  rows[1].status = RowStatus::Converged;
  rows[1].iterations = 4;
  rows[1].time_s = 5.0;
  rows[1].perturbation = 0.3;
  rows[1].remainder_norm = 3e-9;
  rows[2].status = RowStatus::NotConverged;
  rows[2].iterations = 100;
  rows[2].time_s = 50.0;
  const GroupSummary s = summarize(0, spec, rows);
  EXPECT_EQ(s.total, 3);
  EXPECT_EQ(s.converged, 2);
  EXPECT_DOUBLE_EQ(s.convergence_rate, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.mean_iterations, 3.0);
  EXPECT_DOUBLE_EQ(s.mean_time_s, 4.0);
  EXPECT_DOUBLE_EQ(s.mean_time_per_iteration_s, 1.0);
  EXPECT_DOUBLE_EQ(s.mean_remainder_norm, 2e-9);
  EXPECT_DOUBLE_EQ(s.median_perturbation, 0.2);
}

TEST(RunBench, RowsAreOrderedAndComplete) {
  const BenchReport report = run_bench(small_options(1));
  ASSERT_EQ(report.rows.size(), 11u);
  ASSERT_EQ(report.summaries.size(), 2u);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_EQ(report.rows[k].group, 0);
    EXPECT_EQ(report.rows[k].instance, static_cast<int>(k));
  }
  EXPECT_EQ(report.rows[6].group, 1);
  for (const ResultRow& r : report.rows) {
    EXPECT_GE(r.kkt_checks, 1);
    EXPECT_GE(r.time_s, 0.0);
  }
}

TEST(RunBench, ThreadCountDoesNotChangeResults) {
  const BenchReport one = run_bench(small_options(1));
  const BenchReport many = run_bench(small_options(4));
  EXPECT_EQ(body_without_time(one.rows), body_without_time(many.rows));
}

TEST(RunBench, SummaryRecomputedFromCsv) {
  const BenchReport report = run_bench(small_options(2));
  std::stringstream csv;
  write_rows_csv(csv, report.rows);
  const std::vector<ResultRow> rows = read_rows_csv(csv);
  ASSERT_EQ(rows.size(), report.rows.size());
  std::size_t offset = 0;
  for (const GroupSummary& s : report.summaries) {
    const GroupSummary again =
        summarize(s.group, s.spec, std::span<const ResultRow>(rows).subspan(offset, static_cast<std::size_t>(s.total)));
    offset += static_cast<std::size_t>(s.total);
    EXPECT_NEAR(again.convergence_rate, s.convergence_rate, 1e-12);
    EXPECT_NEAR(again.mean_iterations, s.mean_iterations, 1e-12);
    EXPECT_NEAR(again.mean_time_s, s.mean_time_s, 1e-12);
    EXPECT_NEAR(again.mean_time_per_iteration_s, s.mean_time_per_iteration_s, 1e-12);
    EXPECT_NEAR(again.mean_remainder_norm, s.mean_remainder_norm, 1e-12);
    EXPECT_NEAR(again.median_perturbation, s.median_perturbation, 1e-12);
    EXPECT_NEAR(again.p90_perturbation, s.p90_perturbation, 1e-12);
  }
}

TEST(RunBench, NonConvergenceIsReportedPerRow) {
  BenchOptions o;
  o.groups = {parse_group("4:2:2:0.01:3")};
  o.newton.epsilon = 1e-300;
  o.newton.max_iter = 3;
  const BenchReport report = run_bench(o);
  ASSERT_EQ(report.rows.size(), 3u);
  for (const ResultRow& r : report.rows) EXPECT_FALSE(r.converged());
  EXPECT_EQ(report.summaries[0].converged, 0);
}

TEST(RowsCsv, HeaderAndErrors) {
  std::stringstream empty;
  EXPECT_THROW(read_rows_csv(empty), ParseError);
  std::stringstream bad("header\n1,2,3\n");
  EXPECT_THROW(read_rows_csv(bad), ParseError);
  std::ostringstream os;
  write_rows_csv(os, {});
  EXPECT_EQ(os.str(),
            "group,instance,m,d,n,e,status,iterations,perturbation,remainder_norm,"
            "constraint_residual,kkt_checks,max_kkt_ratio,time_s\n");
}
