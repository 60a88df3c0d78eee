#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "bore/pls_classifier.hpp"

namespace bore {

/// Random Fourier features for the squared-exponential kernel.
///
/// Features come in cos/sin pairs sharing a frequency (phases 0 and -pi/2);
/// frequencies are drawn by randomised quasi-Monte Carlo so that
/// phi(x)^T phi(x') tracks k(x, x') closely at a few hundred features.
class RandomFeatureMap {
 public:
  RandomFeatureMap(const Kernel& kernel, int num_features, std::uint64_t seed);

  [[nodiscard]] Eigen::VectorXd features(const Point& x) const;
  /// Rows are d phi_j / dx.
  [[nodiscard]] Eigen::MatrixXd jacobian(const Point& x) const;

  [[nodiscard]] int num_features() const noexcept { return static_cast<int>(phases_.size()); }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(frequencies_.cols()); }
  [[nodiscard]] const Eigen::MatrixXd& frequencies() const noexcept { return frequencies_; }
  [[nodiscard]] const Eigen::VectorXd& phases() const noexcept { return phases_; }

 private:
  Eigen::MatrixXd frequencies_;  // num_features x dim
  Eigen::VectorXd phases_;
  double amplitude_;
};

/// Least-squares classifier posterior in feature space; same contract as ClassifierPosterior
/// with k replaced by phi(x)^T phi(x').
class FeaturePosterior final : public ClassifierModel {
 public:
  [[nodiscard]] static FeaturePosterior fit(std::shared_ptr<const RandomFeatureMap> map, const PointList& inputs,
                                            const Labels& labels, const ConfidenceSettings& settings);

  [[nodiscard]] int dim() const override { return map_->dim(); }
  [[nodiscard]] std::size_t num_observations() const override { return count_; }
  [[nodiscard]] const ConfidenceSettings& settings() const override { return settings_; }

  [[nodiscard]] double mean(const Point& x) const override;
  [[nodiscard]] Eigen::VectorXd mean_grad(const Point& x) const override;
  [[nodiscard]] double variance(const Point& x) const override;
  [[nodiscard]] Eigen::VectorXd variance_grad(const Point& x) const override;
  [[nodiscard]] double log_det_ratio() const override { return log_det_ratio_; }

 private:
  FeaturePosterior() = default;

  std::shared_ptr<const RandomFeatureMap> map_;
  Eigen::LLT<Eigen::MatrixXd> precision_;  // Phi^T Phi + lambda I
  Eigen::VectorXd weights_;
  ConfidenceSettings settings_;
  std::size_t count_ = 0;
  double log_det_ratio_ = 0.0;
};

}  // namespace bore
