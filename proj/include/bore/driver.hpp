#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bore/acquisition.hpp"
#include "bore/batch_svgd.hpp"
#include "bore/benchmarks.hpp"
#include "bore/kernels.hpp"

namespace bore {

enum class Algorithm { BorePLS, BorePP, GpUcb, GpEi, Random };

[[nodiscard]] std::string to_string(Algorithm algorithm);
[[nodiscard]] Algorithm algorithm_from_string(const std::string& name);

enum class ClassifierBackend { Kernel, RandomFeatures };

[[nodiscard]] std::string to_string(ClassifierBackend backend);
[[nodiscard]] ClassifierBackend classifier_backend_from_string(const std::string& name);

struct KernelConfig {
  KernelFamily family = KernelFamily::SquaredExponential;
  std::vector<double> lengthscales{0.1};  // one value is broadcast over all dimensions
  double output_scale = 1.0;
  double rq_alpha = 1.0;

  [[nodiscard]] Kernel make(int dim) const;
  bool operator==(const KernelConfig&) const = default;
};

struct NoiseConfig {
  NoiseFamily family = NoiseFamily::Gaussian;
  double scale = 0.1;  // Gaussian: standard deviation
  double dof = 3.0;    // StudentT only

  [[nodiscard]] NoiseModel make() const;
  bool operator==(const NoiseConfig&) const = default;
};

struct ObjectiveConfig {
  enum class Kind { Synthetic, Analytic };

  Kind kind = Kind::Synthetic;
  // synthetic
  int num_centers = 5;
  int domain_size = 100;
  int dim = 1;
  double tau = 0.0;
  std::optional<KernelConfig> kernel;  // defaults to the classifier kernel
  // analytic
  AnalyticFunction function = AnalyticFunction::Rosenbrock;
  bool noise_free = false;
  NoiseConfig noise;
  std::optional<std::uint64_t> seed;  // defaults to the run seed

  bool operator==(const ObjectiveConfig&) const = default;
};

/// Regression baseline settings (GP-UCB / GP-EI).
struct GpConfig {
  double lambda = 0.01;  // = noise variance sigma_eps^2
  double delta = 0.1;
  double noise_subgaussian = 1.0;
  std::optional<double> norm_bound;  // default: rkhs_norm_finite of f on finite domains
  std::optional<double> fixed_beta;

  bool operator==(const GpConfig&) const = default;
};

/// Complete description of one optimisation run.
struct RunConfig {
  std::string name = "run";
  Algorithm algorithm = Algorithm::BorePP;
  double gamma = 0.25;
  std::optional<double> fixed_tau;
  double lambda = 0.025;
  double delta = 0.1;
  std::optional<double> norm_bound;  // default: ||pi*||_k for synthetic objectives, else 1
  std::optional<double> fixed_beta;
  KernelConfig kernel;
  ClassifierBackend backend = ClassifierBackend::Kernel;
  int num_features = 300;
  GpConfig gp;
  int batch_size = 1;
  int budget = 100;
  int initial_points = 0;
  std::uint64_t seed = 0;
  ObjectiveConfig objective;
  SvgdSettings svgd;
  BoxSearchSettings box_search;
  /// Batch runs select by argmax instead of sampling (reproduces the sequential path at M = 1).
  bool consistency_mode = false;
  bool diagnostics = true;
  bool record_timing = false;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

[[nodiscard]] std::unique_ptr<Objective> make_objective(const RunConfig& config);

/// One outer iteration. Sequential runs have exactly one point per record.
struct TrialRecord {
  int t = 0;
  PointList points;
  std::vector<std::size_t> indices;  // finite mode
  std::vector<double> observations;
  std::optional<double> tau;          // threshold used to label the history (none before data)
  Labels labels;                      // labels of the history the model was fit on
  std::vector<double> instant_regret; // f(x) - f(x*) per point
  double cumulative_regret = 0.0;
  double simple_regret = 0.0;
  std::optional<double> beta;         // beta_{t-1}, used for selection
  std::optional<double> beta_after;   // beta_t, after adding this iteration's data
  std::vector<double> sigma_at_query; // sigma_{t-1}(x) per point
  double info_gain = 0.0;             // realised IG after this iteration's data
  std::optional<double> sigma_star;   // sigma_{t-1}(x*) (ground truth only)
  std::optional<double> thm2_instant;
  std::optional<double> thm3_instant;
  std::optional<double> thm2_bound;   // cumulative bound over records 1..t
  std::optional<double> thm3_bound;
  std::optional<double> dist_regret;
  std::optional<double> kl_estimate;
  std::optional<double> thm4_instant;
  int duplicates = 0;
  std::optional<double> wall_ms;
};

/// Invariant checks evaluated while the run progresses.
struct RunDiagnostics {
  bool variance_monotone = true;    // sigma_t^2 never increased on the finite domain
  double max_variance_increase = 0.0;
  bool variance_sum_ok = true;      // sum sigma_{i-1}(x_i) <= sqrt(4 (N + 2) IG_N)
  double variance_sum = 0.0;
  double variance_sum_bound = 0.0;
  bool checked = false;
};

struct RunResult {
  RunConfig config;
  std::vector<TrialRecord> records;
  RunDiagnostics diagnostics;
  double f_star = 0.0;
  std::optional<double> l_eps;
  std::optional<double> l_pi;
  double norm_bound = 0.0;      // b used by the classifier
  std::optional<double> gp_norm_bound;
};

[[nodiscard]] RunResult run_sequential(const RunConfig& config);
[[nodiscard]] RunResult run_sequential(const RunConfig& config, const Objective& objective);
[[nodiscard]] RunResult run_batch(const RunConfig& config);
[[nodiscard]] RunResult run_batch(const RunConfig& config, const Objective& objective);
/// run_batch when batch_size > 1 or consistency_mode, else run_sequential.
[[nodiscard]] RunResult run(const RunConfig& config);

/// L_eps over the padded range of pi* values (see README for the padding rule).
[[nodiscard]] double epsilon_lipschitz(const FiniteGroundTruth& truth, const NoiseModel& noise);

/// L_eps beta_T (sqrt(4 (T + 2) xi_T) + sum_t sigma_{t-1}(x*)), xi_T the realised IG of the records.
[[nodiscard]] double thm2_bound(std::span<const TrialRecord> records, double l_eps, double beta_T,
                                std::span<const double> sigma_star_trace);
/// 4 L_eps beta_T sqrt((T + 2) xi_T).
[[nodiscard]] double thm3_bound(std::span<const TrialRecord> records, double l_eps, double beta_T);

struct DistributionalRegret {
  double regret = 0.0;  // E_p[f] - E_l[f]
  double kl = 0.0;      // KL(p || l)
};

/// Compares a distribution over the finite domain with l(x) ∝ pi*(x). Weights need not be normalised.
/// Throws InvalidInput on zero total mass.
[[nodiscard]] DistributionalRegret distributional_regret(std::span<const double> weights,
                                                         const FiniteGroundTruth& truth);

/// Histogram of finite-domain indices as weights.
[[nodiscard]] std::vector<double> index_histogram(std::span<const std::size_t> indices, std::size_t domain_size);

}  // namespace bore
