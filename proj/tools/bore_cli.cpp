#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bore/config.hpp"
#include "bore/driver.hpp"
#include "bore/errors.hpp"
#include "bore/experiments.hpp"
#include "bore/results.hpp"
#include "bore/validate.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& output, bool timing) {
  bore::RunConfig config = bore::load_config(config_path);
  if (timing) config.record_timing = true;
  const auto result = bore::run(config);
  bore::ResultsTable table;
  table.append(result, bore::run_id(config.name, config.algorithm, config.seed));
  const auto dir = output.empty() ? bore::default_output_dir() : std::filesystem::path(output);
  const auto path = dir / bore::results_filename(config.name, config.algorithm, config.seed);
  bore::write_csv(table, path);
  const auto& last = result.records.empty() ? bore::TrialRecord{} : result.records.back();
  std::cout << path.string() << "\n";
  std::cout << "iterations " << result.records.size() << ", cumulative regret "
            << bore::format_double(last.cumulative_regret) << ", simple regret "
            << bore::format_double(last.simple_regret) << "\n";
  if (result.diagnostics.checked && (!result.diagnostics.variance_monotone || !result.diagnostics.variance_sum_ok))
    std::cerr << "warning: variance diagnostics failed\n";
  return 0;
}

int cmd_theory(const bore::TheoryOptions& options) {
  const auto out = bore::run_theory(options);
  for (const auto& f : out.files) std::cout << f.string() << "\n";
  for (const auto& [name, runs] : out.runs) {
    double mean = 0.0;
    for (const auto& r : runs) mean += r.records.back().cumulative_regret;
    mean /= static_cast<double>(runs.size());
    std::cout << name << ": mean cumulative regret " << bore::format_double(mean) << "\n";
  }
  return 0;
}

int cmd_bench(const std::string& suite_path, const std::string& output, int jobs) {
  auto suite = bore::load_suite(suite_path);
  if (!output.empty()) suite.output_dir = output;
  const auto out = bore::run_suite(suite, jobs);
  for (const auto& f : out.files) std::cout << f.string() << "\n";
  return 0;
}

int cmd_validate(bool fast) {
  const auto checks = bore::run_validation(fast);
  int failed = 0;
  double total = 0.0;
  for (const auto& c : checks) {
    std::printf("%s  %-48s %8.3fs  %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.seconds, c.detail.c_str());
    total += c.seconds;
    if (!c.passed) ++failed;
  }
  std::printf("%d/%zu checks passed in %.2fs\n", static_cast<int>(checks.size()) - failed, checks.size(), total);
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimisation by density-ratio estimation with least-squares classifiers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  bool timing = false;
  auto* run = app.add_subcommand("run", "Execute one run described by a JSON config file");
  run->add_option("--config", config_path, "Run config file")->required();
  run->add_option("--output", output, "Output directory (default $BORE_OUTPUT_DIR or ./results)");
  run->add_flag("--timing", timing, "Record wall-clock time per iteration");

  bore::TheoryOptions theory_opts;
  std::string theory_output;
  auto* theory = app.add_subcommand("theory", "Theory-assessment experiment with default settings");
  theory->add_option("--trials", theory_opts.trials, "Number of trials")->capture_default_str();
  theory->add_option("--budget", theory_opts.budget, "Iterations per trial")->capture_default_str();
  theory->add_option("--seed", theory_opts.seed, "Base seed")->capture_default_str();
  theory->add_option("--output", theory_output, "Output directory");
  theory->add_option("--jobs", theory_opts.jobs, "Worker threads")->capture_default_str();
  theory->add_flag("--timing", theory_opts.record_timing, "Record wall-clock time per iteration");

  std::string suite_path;
  std::string bench_output;
  int bench_jobs = 1;
  auto* bench = app.add_subcommand("bench", "Execute an experiment suite");
  bench->add_option("--suite", suite_path, "Suite file")->required();
  bench->add_option("--output", bench_output, "Output directory (overrides the suite's)");
  bench->add_option("--jobs", bench_jobs, "Worker threads")->capture_default_str();

  bool fast = false;
  auto* validate = app.add_subcommand("validate", "Run the oracle and identity battery");
  validate->add_flag("--fast", fast, "Small instances only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(config_path, output, timing);
    if (*theory) {
      theory_opts.output_dir = theory_output;
      return cmd_theory(theory_opts);
    }
    if (*bench) return cmd_bench(suite_path, bench_output, bench_jobs);
    if (*validate) return cmd_validate(fast);
  } catch (const bore::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
