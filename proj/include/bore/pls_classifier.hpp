#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bore/kernels.hpp"
#include "bore/linalg.hpp"

namespace bore {

using Labels = std::vector<int>;

/// Settings of the confidence width beta_t(delta).
struct ConfidenceSettings {
  double lambda = 0.025;
  double norm_bound = 1.0;  // b >= ||pi||_k
  double delta = 0.1;
  double noise_subgaussian = 1.0;  // R; the classifier uses 1
  std::optional<double> fixed_beta;  // overrides the schedule when set

  void validate() const;
};

/// Tolerance below zero at which a predicted variance is treated as roundoff.
inline constexpr double kVarianceRoundoff = 1e-12;

/// Probabilistic least-squares model interface shared by the kernel and feature-map backends.
///
/// Implementations are immutable snapshots; all queries are const and safe to
/// issue concurrently.
class ClassifierModel {
 public:
  virtual ~ClassifierModel() = default;

  [[nodiscard]] virtual int dim() const = 0;
  [[nodiscard]] virtual std::size_t num_observations() const = 0;
  [[nodiscard]] virtual const ConfidenceSettings& settings() const = 0;

  [[nodiscard]] virtual double mean(const Point& x) const = 0;
  [[nodiscard]] virtual Eigen::VectorXd mean_grad(const Point& x) const = 0;

  /// sigma_t^2(x), clamped at zero for roundoff; throws NumericalError below -1e-12.
  [[nodiscard]] virtual double variance(const Point& x) const = 0;
  [[nodiscard]] virtual Eigen::VectorXd variance_grad(const Point& x) const = 0;

  /// log |I + lambda^-1 K_t|
  [[nodiscard]] virtual double log_det_ratio() const = 0;

  [[nodiscard]] double stddev(const Point& x) const;
  [[nodiscard]] Eigen::VectorXd stddev_grad(const Point& x) const;

  /// Realised information gain 1/2 log |I + lambda^-1 K_t|.
  [[nodiscard]] double info_gain() const { return 0.5 * log_det_ratio(); }

  /// b + R sqrt(2/lambda * log(|I + K/lambda|^{1/2} / delta))
  [[nodiscard]] double beta() const;

  /// pi_hat + beta * sigma, before the [0, 1] clamp.
  [[nodiscard]] double ucb_unclamped(const Point& x) const;
  [[nodiscard]] Eigen::VectorXd ucb_unclamped_grad(const Point& x) const;

  /// min(1, max(0, pi_hat + beta * sigma))
  [[nodiscard]] double ucb(const Point& x) const;

 protected:
  static double clamp_variance(double raw);
};

/// Closed-form kernel PLS posterior over binary labels.
class ClassifierPosterior final : public ClassifierModel {
 public:
  /// Prior state (t = 0): mean 0, variance k(x, x).
  ClassifierPosterior(Kernel kernel, ConfidenceSettings settings);

  /// Posterior sharing an existing factor; labels must match its inputs.
  ClassifierPosterior(std::shared_ptr<const RegularisedGram> gram, Labels labels, ConfidenceSettings settings);

  [[nodiscard]] static ClassifierPosterior fit(const Kernel& kernel, const PointList& inputs, const Labels& labels,
                                               const ConfidenceSettings& settings);

  [[nodiscard]] int dim() const override { return gram_->kernel().dim(); }
  [[nodiscard]] std::size_t num_observations() const override { return gram_->size(); }
  [[nodiscard]] const ConfidenceSettings& settings() const override { return settings_; }

  [[nodiscard]] double mean(const Point& x) const override;
  [[nodiscard]] Eigen::VectorXd mean_grad(const Point& x) const override;
  [[nodiscard]] double variance(const Point& x) const override;
  [[nodiscard]] Eigen::VectorXd variance_grad(const Point& x) const override;
  [[nodiscard]] double log_det_ratio() const override { return gram_->log_det_ratio(); }

  /// Posterior with one extra observation appended (shares nothing mutable with *this).
  [[nodiscard]] ClassifierPosterior with_observation(const Point& x, int label) const;
  /// Same inputs and factor, new labels.
  [[nodiscard]] ClassifierPosterior relabeled(Labels labels) const;

  [[nodiscard]] const Kernel& kernel() const noexcept { return gram_->kernel(); }
  [[nodiscard]] const PointList& inputs() const noexcept { return gram_->inputs(); }
  [[nodiscard]] const Labels& labels() const noexcept { return labels_; }
  [[nodiscard]] const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
  [[nodiscard]] const RegularisedGram& gram() const noexcept { return *gram_; }
  [[nodiscard]] std::shared_ptr<const RegularisedGram> shared_gram() const noexcept { return gram_; }

 private:
  // Rows are grad_x k(x, x_i)^T.
  [[nodiscard]] Eigen::MatrixXd kernel_jacobian(const Point& x) const;

  std::shared_ptr<const RegularisedGram> gram_;
  Labels labels_;
  Eigen::VectorXd alpha_;
  ConfidenceSettings settings_;
};

/// 1/2 sum_i log(1 + sigma_{i-1}^2(x_i) / lambda), refitting on every prefix.
/// Independent of the determinant route used by ClassifierModel::info_gain().
[[nodiscard]] double info_gain_sequential(const Kernel& kernel, const PointList& inputs, double lambda);

void check_binary_labels(const Labels& labels);

}  // namespace bore
