// bezgcd: generate instances, solve one, or run a benchmark batch.
//
//   bezgcd gen   --m 10 --n 10 --d 3 --e 0.01 --count 100 --seed 1 --out dir
//   bezgcd solve --input dir/instance_00000.json [--d 3] [--out result.json]
//   bezgcd bench --groups 10:3:10:0.01:100 10:4:10:0.01:100 --jobs 8 --out dir
//
// solve exits 0 on convergence, 2 on non-convergence and 1 on any error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bezgcd/bench.hpp"
#include "bezgcd/errors.hpp"
#include "bezgcd/gpgcd.hpp"
#include "bezgcd/io.hpp"
#include "bezgcd/testgen.hpp"

namespace fs = std::filesystem;
using namespace bezgcd;

namespace {

constexpr int exit_converged = 0;
constexpr int exit_error = 1;
constexpr int exit_not_converged = 2;

struct GenArgs {
  InstanceSpec spec;
  fs::path out = "instances";
};

struct SolveArgs {
  fs::path input;
  int d = 0;
  NewtonConfig config{0.1, 1.0, 100, KktMode::MinNormFallback};
  std::string orientation = "auto";
  bool normalize = false;
  std::string out;
};

struct BenchArgs {
  std::vector<std::string> groups;
  std::uint64_t seed = 1;
  int jobs = 0;
  fs::path out = "bench";
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

int run_gen(const GenArgs& args) {
  args.spec.validate();
  fs::create_directories(args.out);
  const std::vector<Instance> instances = generate(args.spec);
  nlohmann::json manifest = {{"m", args.spec.m},       {"n", args.spec.n},
                             {"d", args.spec.d},       {"e", args.spec.e},
                             {"seed", args.spec.seed}, {"count", args.spec.count}};
  manifest["files"] = nlohmann::json::array();
  for (std::size_t k = 0; k < instances.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "instance_%05zu.json", k);
    write_instance(args.out / name, to_instance_file(instances[k], args.spec.d));
    manifest["files"].push_back(name);
  }
  open_output(args.out / "manifest.json") << manifest.dump(1) << '\n';
  return exit_converged;
}

int run_solve(const SolveArgs& args) {
  const InstanceFile file = read_instance(args.input);
  ProblemSpec problem;
  problem.polys = file.polys;
  problem.d = args.d > 0 ? args.d : file.d;
  problem.config = args.config;
  problem.normalize_inputs = args.normalize;
  if (args.orientation == "leading") problem.orientation = Orientation::Leading;
  else if (args.orientation == "trailing") problem.orientation = Orientation::Trailing;

  const SolveResult result = solve(problem);
  const std::string text = result_to_json(result).dump(1);
  if (args.out.empty() || args.out == "-") std::cout << text << '\n';
  else open_output(args.out) << text << '\n';
  if (!result.converged)
    std::cerr << "bezgcd: no convergence after " << result.iterations << " iterations\n";
  return result.converged ? exit_converged : exit_not_converged;
}

int run_bench_cmd(const BenchArgs& args) {
  BenchOptions options;
  for (const std::string& g : args.groups) options.groups.push_back(parse_group(g));
  options.seed = args.seed;
  options.jobs = args.jobs > 0 ? args.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const BenchReport report = run_bench(options);

  fs::create_directories(args.out);
  {
    std::ofstream rows = open_output(args.out / "rows.csv");
    write_rows_csv(rows, report.rows);
  }
  {
    std::ofstream summary = open_output(args.out / "summary.csv");
    write_summary_csv(summary, report.summaries);
  }
  write_summary_csv(std::cout, report.summaries);
  for (const ResultRow& r : report.rows)
    if (r.status == RowStatus::Error)
      std::cerr << "bezgcd: group " << r.group << " instance " << r.instance << ": " << r.error << '\n';
  return exit_converged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate GCD of several real polynomials via the Bezout matrix"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate seeded random instances");
  gen_cmd->add_option("--m", gen.spec.m, "Degree of every polynomial")->capture_default_str();
  gen_cmd->add_option("--n", gen.spec.n, "Number of polynomials")->capture_default_str();
  gen_cmd->add_option("--d", gen.spec.d, "Degree of the planted GCD")->capture_default_str();
  gen_cmd->add_option("--e", gen.spec.e, "Noise norm per polynomial")->capture_default_str();
  gen_cmd->add_option("--count", gen.spec.count, "Number of instances")->capture_default_str();
  gen_cmd->add_option("--seed", gen.spec.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->capture_default_str();

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one instance file");
  solve_cmd->add_option("--input", solve_args.input, "Instance JSON")->required();
  solve_cmd->add_option("--d", solve_args.d, "GCD degree (default: the file's d)");
  solve_cmd->add_option("--epsilon", solve_args.config.epsilon, "Stop when ||d_k|| < epsilon")
      ->capture_default_str();
  solve_cmd->add_option("--alpha", solve_args.config.alpha, "Step width")->capture_default_str();
  solve_cmd->add_option("--max-iter", solve_args.config.max_iter, "Iteration limit")->capture_default_str();
  solve_cmd->add_option("--orientation", solve_args.orientation, "Constraint column order")
      ->check(CLI::IsMember({"auto", "leading", "trailing"}))
      ->capture_default_str();
  solve_cmd->add_flag("--normalize", solve_args.normalize, "Scale inputs to unit norm while solving");
  solve_cmd->add_option("--out", solve_args.out, "Result JSON (default: stdout)");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Generate and solve benchmark groups");
  bench_cmd->add_option("--groups", bench.groups, "Groups as m:d:n:e:count")->required();
  bench_cmd->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads (0: hardware concurrency)")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Output directory for rows.csv and summary.csv")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_error;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*solve_cmd) return run_solve(solve_args);
    return run_bench_cmd(bench);
  } catch (const ParseError& e) {
    std::cerr << "bezgcd: parse error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "bezgcd: error: " << e.what() << '\n';
  }
  return exit_error;
}
