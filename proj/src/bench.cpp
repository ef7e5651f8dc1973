#include "bezgcd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "bezgcd/errors.hpp"
#include "bezgcd/gpgcd.hpp"
#include "bezgcd/io.hpp"
#include "bezgcd/testgen.hpp"

namespace bezgcd {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? text.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(const std::string& s, std::string_view field) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw InvalidProblem("group: bad integer for " + std::string(field) + ": '" + s + "'");
  return v;
}

double parse_double(const std::string& s, std::string_view field) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw InvalidProblem("bad number for " + std::string(field) + ": '" + s + "'");
  return v;
}

ResultRow solve_row(int group, int instance, const GroupSpec& spec, const Instance& inst,
                    const NewtonConfig& newton) {
  ResultRow row;
  row.group = group;
  row.instance = instance;
  row.spec = spec;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ProblemSpec problem;
    problem.polys = inst.polys;
    problem.d = spec.d;
    problem.config = newton;
    const SolveResult r = solve(problem);
    row.status = r.converged ? RowStatus::Converged : RowStatus::NotConverged;
    row.iterations = r.iterations;
    row.perturbation = r.perturbation;
    row.remainder_norm = r.remainder_norm;
    row.constraint_residual = r.constraint_residual;
    row.kkt_checks = static_cast<int>(r.trace.size());
    for (const IterationRecord& rec : r.trace)
      row.max_kkt_ratio = std::max(row.max_kkt_ratio, rec.kkt_residual / (1.0 + rec.constraint_norm));
  } catch (const std::exception& e) {
    row.status = RowStatus::Error;
    row.perturbation = std::numeric_limits<double>::quiet_NaN();
    row.remainder_norm = std::numeric_limits<double>::quiet_NaN();
    row.constraint_residual = std::numeric_limits<double>::quiet_NaN();
    row.error = e.what();
  }
  row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

double mean(std::span<const double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

GroupSpec parse_group(std::string_view text) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 5) throw InvalidProblem("group must be m:d:n:e:count, got '" + std::string(text) + "'");
  GroupSpec g;
  g.m = parse_int(parts[0], "m");
  g.d = parse_int(parts[1], "d");
  g.n = parse_int(parts[2], "n");
  g.e = parse_double(parts[3], "e");
  g.count = parse_int(parts[4], "count");
  InstanceSpec{g.m, g.n, g.d, g.e, 0, g.count}.validate();
  return g;
}

std::string group_label(const GroupSpec& g) {
  std::ostringstream os;
  os << g.m << ':' << g.d << ':' << g.n << ':' << g.e << ':' << g.count;
  return os.str();
}

std::uint64_t group_seed(std::uint64_t seed, int index) {
  return substream_seed(seed ^ 0x5bd1e9955bd1e995ULL, static_cast<std::uint64_t>(index));
}

BenchReport run_bench(const BenchOptions& options) {
  options.newton.validate();
  struct Task {
    int group;
    int instance;
  };
  std::vector<Task> tasks;
  std::vector<std::vector<Instance>> instances;
  for (std::size_t g = 0; g < options.groups.size(); ++g) {
    const GroupSpec& spec = options.groups[g];
    instances.push_back(generate({spec.m, spec.n, spec.d, spec.e,
                                  group_seed(options.seed, static_cast<int>(g)), spec.count}));
    for (int k = 0; k < spec.count; ++k) tasks.push_back({static_cast<int>(g), k});
  }

  BenchReport report;
  report.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      const auto g = static_cast<std::size_t>(task.group);
      report.rows[t] = solve_row(task.group, task.instance, options.groups[g],
                                 instances[g][static_cast<std::size_t>(task.instance)], options.newton);
    }
  };
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  std::size_t offset = 0;
  for (std::size_t g = 0; g < options.groups.size(); ++g) {
    const auto count = static_cast<std::size_t>(options.groups[g].count);
    report.summaries.push_back(summarize(static_cast<int>(g), options.groups[g],
                                         std::span<const ResultRow>(report.rows).subspan(offset, count)));
    offset += count;
  }
  return report;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

GroupSummary summarize(int group, const GroupSpec& spec, std::span<const ResultRow> rows) {
  GroupSummary s;
  s.group = group;
  s.spec = spec;
  s.total = static_cast<int>(rows.size());
  std::vector<double> iters, times, remainders, deltas;
  for (const ResultRow& r : rows) {
    if (!r.converged()) continue;
    ++s.converged;
    iters.push_back(r.iterations);
    times.push_back(r.time_s);
    remainders.push_back(r.remainder_norm);
    deltas.push_back(r.perturbation);
  }
  s.convergence_rate = s.total ? static_cast<double>(s.converged) / s.total : 0.0;
  s.mean_iterations = mean(iters);
  s.mean_time_s = mean(times);
  s.mean_time_per_iteration_s = s.mean_time_s / (s.mean_iterations + 1.0);
  s.mean_remainder_norm = mean(remainders);
  s.median_perturbation = quantile(deltas, 0.5);
  s.p90_perturbation = quantile(deltas, 0.9);
  return s;
}

std::string_view status_name(RowStatus status) {
  switch (status) {
    case RowStatus::Converged: return "converged";
    case RowStatus::NotConverged: return "not_converged";
    case RowStatus::Error: return "error";
  }
  return "error";
}

void write_rows_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << "group,instance,m,d,n,e,status,iterations,perturbation,remainder_norm,"
         "constraint_residual,kkt_checks,max_kkt_ratio,time_s\n";
  for (const ResultRow& r : rows) {
    out << r.group << ',' << r.instance << ',' << r.spec.m << ',' << r.spec.d << ',' << r.spec.n << ','
        << format_double(r.spec.e) << ',' << status_name(r.status) << ',' << r.iterations << ','
        << format_double(r.perturbation) << ',' << format_double(r.remainder_norm) << ','
        << format_double(r.constraint_residual) << ',' << r.kkt_checks << ','
        << format_double(r.max_kkt_ratio) << ',' << format_double(r.time_s) << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const GroupSummary> summaries) {
  out << "group,m,d,n,e,count,converged,convergence_rate,mean_iterations,mean_time_s,"
         "mean_time_per_iteration_s,mean_remainder_norm,median_perturbation,p90_perturbation\n";
  for (const GroupSummary& s : summaries) {
    out << s.group << ',' << s.spec.m << ',' << s.spec.d << ',' << s.spec.n << ','
        << format_double(s.spec.e) << ',' << s.total << ',' << s.converged << ','
        << format_double(s.convergence_rate) << ',' << format_double(s.mean_iterations) << ','
        << format_double(s.mean_time_s) << ',' << format_double(s.mean_time_per_iteration_s) << ','
        << format_double(s.mean_remainder_norm) << ',' << format_double(s.median_perturbation) << ','
        << format_double(s.p90_perturbation) << '\n';
  }
}

std::vector<ResultRow> read_rows_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("rows csv: missing header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 14) throw ParseError("rows csv: expected 14 fields");
    ResultRow r;
    r.group = parse_int(f[0], "group");
    r.instance = parse_int(f[1], "instance");
    r.spec.m = parse_int(f[2], "m");
    r.spec.d = parse_int(f[3], "d");
    r.spec.n = parse_int(f[4], "n");
    r.spec.e = parse_double(f[5], "e");
    if (f[6] == "converged") r.status = RowStatus::Converged;
    else if (f[6] == "not_converged") r.status = RowStatus::NotConverged;
    else if (f[6] == "error") r.status = RowStatus::Error;
    else throw ParseError("rows csv: unknown status '" + f[6] + "'");
    r.iterations = parse_int(f[7], "iterations");
    r.perturbation = parse_double(f[8], "perturbation");
    r.remainder_norm = parse_double(f[9], "remainder_norm");
    r.constraint_residual = parse_double(f[10], "constraint_residual");
    r.kkt_checks = parse_int(f[11], "kkt_checks");
    r.max_kkt_ratio = parse_double(f[12], "max_kkt_ratio");
    r.time_s = parse_double(f[13], "time_s");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace bezgcd
