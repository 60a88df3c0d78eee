#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bore {

using Point = Eigen::VectorXd;
using PointList = std::vector<Point>;

enum class KernelFamily { SquaredExponential, Matern52, RationalQuadratic };

[[nodiscard]] std::string to_string(KernelFamily family);
[[nodiscard]] KernelFamily kernel_family_from_string(const std::string& name);

/// Stationary positive-definite kernel with per-dimension lengthscales.
///
/// All families satisfy k(x, x) = output_scale. Gradients are taken with respect
/// to the first argument.
class Kernel {
 public:
  Kernel(KernelFamily family, Eigen::VectorXd lengthscales, double output_scale = 1.0, double rq_alpha = 1.0);

  /// Isotropic kernel with the same lengthscale on every dimension.
  static Kernel isotropic(KernelFamily family, double lengthscale, int dim = 1, double output_scale = 1.0);

  [[nodiscard]] double eval(const Point& x, const Point& x2) const;
  [[nodiscard]] Eigen::VectorXd eval_grad(const Point& x, const Point& x2) const;

  /// k(x, x) for any x.
  [[nodiscard]] double diag() const noexcept { return output_scale_; }

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(lengthscales_.size()); }
  [[nodiscard]] KernelFamily family() const noexcept { return family_; }
  [[nodiscard]] const Eigen::VectorXd& lengthscales() const noexcept { return lengthscales_; }
  [[nodiscard]] double output_scale() const noexcept { return output_scale_; }
  [[nodiscard]] double rq_alpha() const noexcept { return rq_alpha_; }

  bool operator==(const Kernel&) const = default;

 private:
  void check_dims(const Point& x, const Point& x2) const;
  // Squared scaled distance sum(((x - x2) / l)^2).
  [[nodiscard]] double scaled_sq_dist(const Point& x, const Point& x2) const;

  KernelFamily family_;
  Eigen::VectorXd lengthscales_;
  Eigen::VectorXd inv_sq_lengthscales_;
  double output_scale_;
  double rq_alpha_;
};

/// Kernel matrix together with the inputs it was built from.
struct GramMatrix {
  Eigen::MatrixXd entries;
  PointList points;
};

[[nodiscard]] GramMatrix build_gram(const Kernel& kernel, const PointList& points);

/// [k(a_i, b_j)]
[[nodiscard]] Eigen::MatrixXd cross_gram(const Kernel& kernel, const PointList& a, const PointList& b);

/// [k(x, p_i)]_i
[[nodiscard]] Eigen::VectorXd kernel_vector(const Kernel& kernel, const PointList& points, const Point& x);

/// Diagonal jitter applied before factorising a raw Gram matrix: 1e-10 * trace / n.
[[nodiscard]] double gram_jitter(const Eigen::MatrixXd& gram);

/// Minimum-norm interpolant norm sqrt(v^T K^-1 v) of `values` observed at `points`.
/// Throws NumericalError when the jittered Gram matrix is still not positive definite.
[[nodiscard]] double rkhs_norm_finite(const Kernel& kernel, const PointList& points, const Eigen::VectorXd& values);

}  // namespace bore
