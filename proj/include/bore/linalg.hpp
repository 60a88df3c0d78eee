#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "bore/kernels.hpp"

namespace bore {

/// Lower Cholesky factor of a symmetric positive-definite matrix. If the plain
/// factorisation fails and `allow_jitter` is set, retries once with
/// gram_jitter() added to the diagonal. Throws NumericalError with a condition
/// estimate otherwise.
[[nodiscard]] Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a, bool allow_jitter = true);

/// Ratio of extreme eigenvalues, used in diagnostics only.
[[nodiscard]] double condition_estimate(const Eigen::MatrixXd& a);

/// Cholesky factor of K_t + lambda * I, grown one observation at a time.
///
/// Appending borders the factor in O(t^2); every `kRefactorInterval` appends the
/// factor is rebuilt from scratch to bound accumulated rounding drift.
class RegularisedGram {
 public:
  static constexpr int kRefactorInterval = 50;

  RegularisedGram(Kernel kernel, double lambda);
  RegularisedGram(Kernel kernel, double lambda, const PointList& inputs);

  void append(const Point& x);
  [[nodiscard]] RegularisedGram extended(const Point& x) const;

  [[nodiscard]] const Kernel& kernel() const noexcept { return kernel_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] std::size_t size() const noexcept { return inputs_.size(); }
  [[nodiscard]] const PointList& inputs() const noexcept { return inputs_; }

  /// Lower-triangular factor, size() x size().
  [[nodiscard]] auto chol() const { return chol_.topLeftCorner(size(), size()); }

  /// L^-1 b
  [[nodiscard]] Eigen::VectorXd forward(const Eigen::VectorXd& b) const;
  /// (K + lambda I)^-1 b
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

  /// log |I + lambda^-1 K_t| = 2 sum log diag(L) - t log lambda.
  [[nodiscard]] double log_det_ratio() const;

  [[nodiscard]] Eigen::VectorXd kernel_column(const Point& x) const { return kernel_vector(kernel_, inputs_, x); }

 private:
  void refactor();
  void reserve(std::size_t n);

  Kernel kernel_;
  double lambda_;
  PointList inputs_;
  Eigen::MatrixXd chol_;  // capacity >= size(); only the leading block is valid
  int appends_since_refactor_ = 0;
};

}  // namespace bore
