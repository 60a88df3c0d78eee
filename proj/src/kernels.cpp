#include "bore/kernels.hpp"

#include <cmath>
#include <sstream>

#include "bore/errors.hpp"
#include "bore/linalg.hpp"

namespace bore {

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::SquaredExponential: return "squared_exponential";
    case KernelFamily::Matern52: return "matern52";
    case KernelFamily::RationalQuadratic: return "rational_quadratic";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "squared_exponential" || name == "se" || name == "rbf") return KernelFamily::SquaredExponential;
  if (name == "matern52") return KernelFamily::Matern52;
  if (name == "rational_quadratic" || name == "rq") return KernelFamily::RationalQuadratic;
  throw InvalidInput("unknown kernel family '" + name + "'");
}

Kernel::Kernel(KernelFamily family, Eigen::VectorXd lengthscales, double output_scale, double rq_alpha)
    : family_(family),
      lengthscales_(std::move(lengthscales)),
      output_scale_(output_scale),
      rq_alpha_(rq_alpha) {
  if (lengthscales_.size() == 0) throw InvalidInput("kernel needs at least one lengthscale");
  if ((lengthscales_.array() <= 0.0).any() || !lengthscales_.allFinite())
    throw InvalidInput("kernel lengthscales must be positive and finite");
  if (!(output_scale_ > 0.0) || !std::isfinite(output_scale_)) throw InvalidInput("kernel output scale must be positive");
  if (!(rq_alpha_ > 0.0)) throw InvalidInput("rational quadratic alpha must be positive");
  inv_sq_lengthscales_ = lengthscales_.array().square().inverse();
}

Kernel Kernel::isotropic(KernelFamily family, double lengthscale, int dim, double output_scale) {
  if (dim < 1) throw InvalidInput("kernel dimension must be >= 1");
  return Kernel(family, Eigen::VectorXd::Constant(dim, lengthscale), output_scale);
}

void Kernel::check_dims(const Point& x, const Point& x2) const {
  if (x.size() != lengthscales_.size() || x2.size() != lengthscales_.size()) {
    std::ostringstream msg;
    msg << "kernel of dimension " << lengthscales_.size() << " evaluated at points of dimension " << x.size()
        << " and " << x2.size();
    throw InvalidInput(msg.str());
  }
}

double Kernel::scaled_sq_dist(const Point& x, const Point& x2) const {
  return ((x - x2).array().square() * inv_sq_lengthscales_.array()).sum();
}

double Kernel::eval(const Point& x, const Point& x2) const {
  check_dims(x, x2);
  const double r2 = scaled_sq_dist(x, x2);
  switch (family_) {
    case KernelFamily::SquaredExponential:
      return output_scale_ * std::exp(-0.5 * r2);
    case KernelFamily::Matern52: {
      const double s5r = std::sqrt(5.0 * r2);
      return output_scale_ * (1.0 + s5r + 5.0 * r2 / 3.0) * std::exp(-s5r);
    }
    case KernelFamily::RationalQuadratic:
      return output_scale_ * std::pow(1.0 + r2 / (2.0 * rq_alpha_), -rq_alpha_);
  }
  return 0.0;
}

Eigen::VectorXd Kernel::eval_grad(const Point& x, const Point& x2) const {
  check_dims(x, x2);
  const double r2 = scaled_sq_dist(x, x2);
  // Every family has the form g(r^2); d/dx = g'(r^2) * 2 (x - x2) / l^2. `coeff` = 2 g'(r^2).
  double coeff = 0.0;
  switch (family_) {
    case KernelFamily::SquaredExponential:
      coeff = -output_scale_ * std::exp(-0.5 * r2);
      break;
    case KernelFamily::Matern52: {
      const double s5r = std::sqrt(5.0 * r2);
      coeff = -output_scale_ * (5.0 / 3.0) * (1.0 + s5r) * std::exp(-s5r);
      break;
    }
    case KernelFamily::RationalQuadratic:
      coeff = -output_scale_ * std::pow(1.0 + r2 / (2.0 * rq_alpha_), -rq_alpha_ - 1.0);
      break;
  }
  return coeff * ((x - x2).array() * inv_sq_lengthscales_.array()).matrix();
}

GramMatrix build_gram(const Kernel& kernel, const PointList& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = kernel.diag();
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = kernel.eval(points[i], points[j]);
      k(j, i) = k(i, j);
    }
  }
  return {std::move(k), points};
}

Eigen::MatrixXd cross_gram(const Kernel& kernel, const PointList& a, const PointList& b) {
  Eigen::MatrixXd k(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) k(i, j) = kernel.eval(a[i], b[j]);
  return k;
}

Eigen::VectorXd kernel_vector(const Kernel& kernel, const PointList& points, const Point& x) {
  Eigen::VectorXd k(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) k(i) = kernel.eval(x, points[i]);
  return k;
}

double gram_jitter(const Eigen::MatrixXd& gram) {
  if (gram.rows() == 0) return 0.0;
  return 1e-10 * gram.trace() / static_cast<double>(gram.rows());
}

double rkhs_norm_finite(const Kernel& kernel, const PointList& points, const Eigen::VectorXd& values) {
  if (static_cast<std::size_t>(values.size()) != points.size())
    throw InvalidInput("rkhs_norm_finite: one value per point required");
  if (points.empty()) return 0.0;
  Eigen::MatrixXd k = build_gram(kernel, points).entries;
  k.diagonal().array() += gram_jitter(k);
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "rkhs_norm_finite: Gram matrix singular after jitter (condition estimate " << condition_estimate(k) << ")";
    throw NumericalError(msg.str());
  }
  const Eigen::VectorXd w = llt.matrixL().solve(values);
  return std::sqrt(w.squaredNorm());
}

}  // namespace bore
