#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bore/driver.hpp"
#include "bore/results.hpp"

namespace bore {

/// Default output directory: $BORE_OUTPUT_DIR if set, else "results".
[[nodiscard]] std::filesystem::path default_output_dir();

/// Theory-assessment settings for one algorithm: random RKHS classifier on 100
/// uniform points of [0,1], SE kernel (0.1), fixed tau = 0, Gaussian noise variance 0.01.
[[nodiscard]] RunConfig theory_config(Algorithm algorithm, std::uint64_t seed, int budget);

/// Seed of trial i for a base seed.
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t base, int trial);

struct TheoryOptions {
  int trials = 10;
  int budget = 100;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  int jobs = 1;
  bool record_timing = false;
  std::vector<Algorithm> algorithms{Algorithm::BorePLS, Algorithm::BorePP, Algorithm::GpUcb};
};

struct ExperimentOutput {
  std::map<std::string, std::vector<RunResult>> runs;  // by algorithm name
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;
};

/// Runs every (algorithm, trial) pair; trials share the objective across algorithms.
/// Writes one CSV per algorithm and summary.json.
[[nodiscard]] ExperimentOutput run_theory(const TheoryOptions& options);

struct ExperimentSuite {
  std::string name = "suite";
  std::vector<RunConfig> variants;
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path output_dir;
};

[[nodiscard]] ExperimentSuite load_suite(const std::filesystem::path& path);

/// One CSV per (variant, seed), named results_filename(variant.name, algorithm, seed), plus summary.json.
[[nodiscard]] ExperimentOutput run_suite(const ExperimentSuite& suite, int jobs = 1);

/// Runs tasks 0..n-1 on up to `jobs` threads; each task owns its inputs and outputs.
void parallel_for(int n, int jobs, const std::function<void(int)>& task);

}  // namespace bore
