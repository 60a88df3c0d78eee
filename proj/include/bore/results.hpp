#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bore/driver.hpp"

namespace bore {

/// Fixed CSV column order.
inline constexpr const char* kCsvColumns[] = {
    "run_id", "algorithm", "seed",       "t",          "batch_index",   "x",          "y",
    "tau",    "r_t",       "R_t",        "simple_regret", "beta_t",     "sigma_at_query", "info_gain",
    "thm2_bound", "thm3_bound", "dist_regret", "kl_estimate", "wall_ms"};

struct ResultRow {
  std::string run_id;
  std::string algorithm;
  std::uint64_t seed = 0;
  int t = 0;
  int batch_index = 0;
  Point x;
  double y = 0.0;
  std::optional<double> tau;
  double r_t = 0.0;
  double R_t = 0.0;  // running sum over all evaluations so far
  double simple_regret = 0.0;
  std::optional<double> beta_t;
  std::optional<double> sigma_at_query;
  double info_gain = 0.0;
  std::optional<double> thm2_bound;
  std::optional<double> thm3_bound;
  std::optional<double> dist_regret;
  std::optional<double> kl_estimate;
  std::optional<double> wall_ms;

  bool operator==(const ResultRow&) const = default;
};

/// One row per evaluation: T rows for sequential runs, M rows per iteration for batch runs.
struct ResultsTable {
  std::vector<ResultRow> rows;

  void append(const RunResult& result, const std::string& run_id);
};

[[nodiscard]] std::string run_id(const std::string& name, Algorithm algorithm, std::uint64_t seed);
[[nodiscard]] std::string results_filename(const std::string& name, Algorithm algorithm, std::uint64_t seed);

/// 17 significant digits; missing values are written as `null`.
[[nodiscard]] std::string format_double(double value);
[[nodiscard]] std::string format_optional(const std::optional<double>& value);

void write_csv(const ResultsTable& table, const std::filesystem::path& path);
[[nodiscard]] std::string to_csv(const ResultsTable& table);
[[nodiscard]] ResultsTable read_csv(const std::filesystem::path& path);

struct ConfidenceInterval {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Percentile bootstrap CI of the mean.
[[nodiscard]] ConfidenceInterval bootstrap_mean_ci(std::span<const double> values, int resamples, double level,
                                                   std::uint64_t seed);

/// Per-algorithm mean and 95% CI of cumulative and simple regret at every iteration.
[[nodiscard]] nlohmann::json summarize(const std::map<std::string, std::vector<RunResult>>& runs,
                                       std::uint64_t seed, int resamples = 1000);

/// Mean binary cross-entropy of the clipped classifier output on labeled data,
/// -1/n sum z log p + (1 - z) log(1 - p) with p = clamp(pi_hat, eps, 1 - eps).
[[nodiscard]] double cross_entropy_loss(const ClassifierModel& model, const PointList& inputs, const Labels& labels,
                                        double eps = 1e-12);

}  // namespace bore
