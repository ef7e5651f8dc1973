#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bezgcd/newton.hpp"

namespace bezgcd {

/// One benchmark group, written on the command line as m:d:n:e:count.
struct GroupSpec {
  int m = 10;
  int d = 3;
  int n = 10;
  double e = 0.01;
  int count = 100;
};

/// Throws InvalidProblem on malformed text.
GroupSpec parse_group(std::string_view text);
std::string group_label(const GroupSpec& group);

enum class RowStatus { Converged, NotConverged, Error };

struct ResultRow {
  int group = 0;
  int instance = 0;
  GroupSpec spec;
  RowStatus status = RowStatus::Error;
  int iterations = 0;
  double perturbation = 0.0;
  double remainder_norm = 0.0;
  double constraint_residual = 0.0;
  /// Number of KKT solves in the run and the largest ||J d + g|| / (1 + ||g||) among them.
  int kkt_checks = 0;
  double max_kkt_ratio = 0.0;
  double time_s = 0.0;
  std::string error;

  bool converged() const noexcept { return status == RowStatus::Converged; }
};

/// Aggregates over one group. Means over iterations, time and remainder norm
/// use converged rows only; the convergence rate uses all rows.
struct GroupSummary {
  int group = 0;
  GroupSpec spec;
  int total = 0;
  int converged = 0;
  double convergence_rate = 0.0;
  double mean_iterations = 0.0;
  double mean_time_s = 0.0;
  /// mean time / mean number of KKT solves (iterations + 1).
  double mean_time_per_iteration_s = 0.0;
  double mean_remainder_norm = 0.0;
  double median_perturbation = 0.0;
  double p90_perturbation = 0.0;
};

struct BenchOptions {
  std::vector<GroupSpec> groups;
  std::uint64_t seed = 1;
  int jobs = 1;
  NewtonConfig newton{0.1, 1.0, 100, KktMode::MinNormFallback};
};

struct BenchReport {
  /// Ordered by (group, instance) regardless of scheduling.
  std::vector<ResultRow> rows;
  std::vector<GroupSummary> summaries;
};

/// Seed of the instance stream of group `index`.
std::uint64_t group_seed(std::uint64_t seed, int index);

/// Generates every group with its own seed stream and solves all instances on
/// a pool of `jobs` workers. Solver errors become RowStatus::Error rows.
BenchReport run_bench(const BenchOptions& options);

GroupSummary summarize(int group, const GroupSpec& spec, std::span<const ResultRow> rows);

/// Linear-interpolated quantile of the values, q in [0, 1]; NaN when empty.
double quantile(std::vector<double> values, double q);

std::string_view status_name(RowStatus status);

/// Columns: group,instance,m,d,n,e,status,iterations,perturbation,
/// remainder_norm,constraint_residual,kkt_checks,max_kkt_ratio,time_s
void write_rows_csv(std::ostream& out, std::span<const ResultRow> rows);
/// Columns: group,m,d,n,e,count,converged,convergence_rate,mean_iterations,
/// mean_time_s,mean_time_per_iteration_s,mean_remainder_norm,
/// median_perturbation,p90_perturbation
void write_summary_csv(std::ostream& out, std::span<const GroupSummary> summaries);

/// Parses rows written by write_rows_csv (time and error text included).
std::vector<ResultRow> read_rows_csv(std::istream& in);

}  // namespace bezgcd
