#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bore/acquisition.hpp"
#include "bore/kernels.hpp"
#include "bore/pls_classifier.hpp"
#include "bore/random.hpp"
#include "bore/search_space.hpp"

namespace bore {

enum class StepRule {
  /// x += alpha * zeta / sqrt(h), h an exponential moving average of zeta^2 with rate `decay`.
  Adaptive,
  /// x += alpha * decay^k * zeta at step k.
  Plain,
};

[[nodiscard]] std::string to_string(StepRule rule);
[[nodiscard]] StepRule step_rule_from_string(const std::string& name);

struct SvgdSettings {
  double step_size = 1e-3;
  double decay = 0.9;
  int steps = 1000;
  StepRule rule = StepRule::Adaptive;
  double epsilon_floor = 1e-6;

  void validate() const;
  bool operator==(const SvgdSettings&) const = default;
};

struct LogDensityTarget {
  std::function<double(const Point&)> log_p;
  std::function<Eigen::VectorXd(const Point&)> grad_log_p;
};

/// Particles plus the step-size state carried between steps.
struct ParticleSet {
  PointList particles;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  SvgdSettings settings;
  int iteration = 0;
  std::vector<Eigen::VectorXd> squared_grad_avg;  // Adaptive rule state, one per particle

  ParticleSet(PointList particles, Eigen::VectorXd lower, Eigen::VectorXd upper, SvgdSettings settings);

  [[nodiscard]] std::size_t size() const noexcept { return particles.size(); }
  [[nodiscard]] Point project(const Point& x) const;
};

/// Squared-exponential kernel with the median-trick bandwidth
/// h^2 = median(||x_i - x_j||^2) / (2 log(M + 1)); unit bandwidth for M = 1 or a zero median.
[[nodiscard]] Kernel median_trick_kernel(const PointList& particles);

/// One synchronous SVGD update:
/// zeta(x) = 1/M sum_j k(x_j, x) grad log p(x_j) + grad_{x_j} k(x_j, x).
/// Throws NumericalError naming the particle if a score gradient is not finite.
[[nodiscard]] ParticleSet svgd_step(const ParticleSet& ps, const LogDensityTarget& target, const Kernel& svgd_kernel);

/// svgd_step with the median-trick kernel recomputed from the current particles.
[[nodiscard]] ParticleSet svgd_step(const ParticleSet& ps, const LogDensityTarget& target);

/// Runs ps.settings.steps median-trick steps.
[[nodiscard]] ParticleSet run_svgd(ParticleSet ps, const LogDensityTarget& target);

/// log max(epsilon_floor, pi_hat + beta sigma), the smooth surrogate of the log clamped UCB.
[[nodiscard]] LogDensityTarget ucb_log_target(const ClassifierModel& post, double epsilon_floor);

struct Batch {
  PointList points;
  std::vector<std::size_t> indices;  // finite mode only
};

/// Which classifier output the batch distribution is proportional to.
enum class BatchScore {
  Mean,  // p_hat ∝ pi_hat (batch BORE)
  Ucb,   // p_hat ∝ clamped UCB (batch BORE++)
};

/// log max(epsilon_floor, pi_hat).
[[nodiscard]] LogDensityTarget mean_log_target(const ClassifierModel& post, double epsilon_floor);

/// Normalised clamped scores over a finite space (uniform when all vanish).
[[nodiscard]] std::vector<double> batch_weights(const ClassifierModel& post, const SearchSpace& space,
                                                BatchScore score = BatchScore::Ucb);
[[nodiscard]] inline std::vector<double> ucb_weights(const ClassifierModel& post, const SearchSpace& space) {
  return batch_weights(post, space, BatchScore::Ucb);
}

/// M query points. Box: SVGD from i.i.d. uniform particles. Finite: i.i.d. draws
/// from batch_weights(). Throws InvalidInput for batch_size <= 0.
[[nodiscard]] Batch propose_batch(const ClassifierModel& post, const SearchSpace& space, int batch_size,
                                  const SvgdSettings& settings, Rng& rng, BatchScore score = BatchScore::Ucb);

/// Number of points in the batch within `tolerance` of an earlier point of the same batch.
[[nodiscard]] int count_duplicates(const PointList& points, double tolerance = 1e-9);

}  // namespace bore
