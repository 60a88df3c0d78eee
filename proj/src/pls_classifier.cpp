#include "bore/pls_classifier.hpp"

#include <cmath>
#include <sstream>

#include "bore/errors.hpp"

namespace bore {

void ConfidenceSettings::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  if (!(norm_bound >= 0.0) || !std::isfinite(norm_bound)) throw InvalidInput("norm bound must be non-negative");
  if (!(noise_subgaussian >= 0.0)) throw InvalidInput("sub-Gaussian constant must be non-negative");
  if (fixed_beta && !(*fixed_beta >= 0.0)) throw InvalidInput("fixed beta must be non-negative");
}

double ClassifierModel::clamp_variance(double raw) {
  if (raw < -kVarianceRoundoff) {
    std::ostringstream msg;
    msg << "posterior variance " << raw << " is negative beyond roundoff";
    throw NumericalError(msg.str());
  }
  return raw < 0.0 ? 0.0 : raw;
}

double ClassifierModel::stddev(const Point& x) const { return std::sqrt(variance(x)); }

Eigen::VectorXd ClassifierModel::stddev_grad(const Point& x) const {
  const double sd = stddev(x);
  if (sd <= 0.0) return Eigen::VectorXd::Zero(dim());
  return variance_grad(x) / (2.0 * sd);
}

double ClassifierModel::beta() const {
  const auto& s = settings();
  if (s.fixed_beta) return *s.fixed_beta;
  const double inner = info_gain() + std::log(1.0 / s.delta);
  return s.norm_bound + s.noise_subgaussian * std::sqrt(2.0 / s.lambda * inner);
}

double ClassifierModel::ucb_unclamped(const Point& x) const { return mean(x) + beta() * stddev(x); }

Eigen::VectorXd ClassifierModel::ucb_unclamped_grad(const Point& x) const {
  return mean_grad(x) + beta() * stddev_grad(x);
}

double ClassifierModel::ucb(const Point& x) const { return std::min(1.0, std::max(0.0, ucb_unclamped(x))); }

void check_binary_labels(const Labels& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      std::ostringstream msg;
      msg << "label " << i << " is " << labels[i] << "; labels must be 0 or 1";
      throw InvalidInput(msg.str());
    }
  }
}

ClassifierPosterior::ClassifierPosterior(Kernel kernel, ConfidenceSettings settings)
    : ClassifierPosterior(std::make_shared<const RegularisedGram>(std::move(kernel), settings.lambda), {},
                          settings) {}

ClassifierPosterior::ClassifierPosterior(std::shared_ptr<const RegularisedGram> gram, Labels labels,
                                         ConfidenceSettings settings)
    : gram_(std::move(gram)), labels_(std::move(labels)), settings_(settings) {
  if (!gram_) throw InvalidInput("classifier needs a Gram factor");
  settings_.validate();
  if (gram_->lambda() != settings_.lambda) throw InvalidInput("Gram factor lambda differs from settings lambda");
  if (labels_.size() != gram_->size()) throw InvalidInput("number of labels does not match number of inputs");
  check_binary_labels(labels_);
  Eigen::VectorXd z(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) z(i) = labels_[i];
  alpha_ = gram_->solve(z);
}

ClassifierPosterior ClassifierPosterior::fit(const Kernel& kernel, const PointList& inputs, const Labels& labels,
                                             const ConfidenceSettings& settings) {
  settings.validate();
  if (inputs.size() != labels.size()) throw InvalidInput("number of labels does not match number of inputs");
  return ClassifierPosterior(std::make_shared<const RegularisedGram>(kernel, settings.lambda, inputs), labels,
                             settings);
}

Eigen::MatrixXd ClassifierPosterior::kernel_jacobian(const Point& x) const {
  const auto& in = inputs();
  Eigen::MatrixXd j(in.size(), dim());
  for (std::size_t i = 0; i < in.size(); ++i) j.row(i) = kernel().eval_grad(x, in[i]).transpose();
  return j;
}

double ClassifierPosterior::mean(const Point& x) const {
  if (x.size() != dim()) throw InvalidInput("query dimension does not match classifier");
  if (num_observations() == 0) return 0.0;
  return gram_->kernel_column(x).dot(alpha_);
}

Eigen::VectorXd ClassifierPosterior::mean_grad(const Point& x) const {
  if (x.size() != dim()) throw InvalidInput("query dimension does not match classifier");
  if (num_observations() == 0) return Eigen::VectorXd::Zero(dim());
  return kernel_jacobian(x).transpose() * alpha_;
}

double ClassifierPosterior::variance(const Point& x) const {
  if (x.size() != dim()) throw InvalidInput("query dimension does not match classifier");
  const double prior = kernel().diag();
  if (num_observations() == 0) return prior;
  const Eigen::VectorXd w = gram_->forward(gram_->kernel_column(x));
  return clamp_variance(prior - w.squaredNorm());
}

Eigen::VectorXd ClassifierPosterior::variance_grad(const Point& x) const {
  if (x.size() != dim()) throw InvalidInput("query dimension does not match classifier");
  if (num_observations() == 0) return Eigen::VectorXd::Zero(dim());
  const Eigen::VectorXd v = gram_->solve(gram_->kernel_column(x));
  return -2.0 * kernel_jacobian(x).transpose() * v;
}

ClassifierPosterior ClassifierPosterior::with_observation(const Point& x, int label) const {
  auto next = std::make_shared<const RegularisedGram>(gram_->extended(x));
  Labels labels = labels_;
  labels.push_back(label);
  return ClassifierPosterior(std::move(next), std::move(labels), settings_);
}

ClassifierPosterior ClassifierPosterior::relabeled(Labels labels) const {
  return ClassifierPosterior(gram_, std::move(labels), settings_);
}

double info_gain_sequential(const Kernel& kernel, const PointList& inputs, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  double total = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    double var = kernel.diag();
    if (i > 0) {
      const PointList prefix(inputs.begin(), inputs.begin() + static_cast<std::ptrdiff_t>(i));
      Eigen::MatrixXd a = build_gram(kernel, prefix).entries;
      a.diagonal().array() += lambda;
      const Eigen::VectorXd k = kernel_vector(kernel, prefix, inputs[i]);
      var -= k.dot(a.ldlt().solve(k));
    }
    total += 0.5 * std::log1p(std::max(0.0, var) / lambda);
  }
  return total;
}

}  // namespace bore
