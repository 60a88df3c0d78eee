#include "bore/feature_map.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

#include "bore/errors.hpp"
#include "bore/random.hpp"
#include "bore/search_space.hpp"

namespace bore {

RandomFeatureMap::RandomFeatureMap(const Kernel& kernel, int num_features, std::uint64_t seed) {
  if (kernel.family() != KernelFamily::SquaredExponential)
    throw InvalidInput("random features are only available for the squared-exponential kernel");
  if (num_features < 2 || num_features % 2 != 0) throw InvalidInput("number of random features must be even and >= 2");
  const int d = kernel.dim();
  const int pairs = num_features / 2;
  Rng rng = make_rng(seed, Stream::Features);
  Eigen::VectorXd shift(d);
  for (int k = 0; k < d; ++k) shift(k) = uniform01(rng);
  const PointList base = halton(pairs, d, 1);
  const boost::math::normal standard;
  frequencies_.resize(num_features, d);
  phases_.resize(num_features);
  for (int j = 0; j < pairs; ++j) {
    for (int k = 0; k < d; ++k) {
      double u = base[j](k) + shift(k);
      u -= std::floor(u);
      u = std::clamp(u, 1e-12, 1.0 - 1e-12);
      const double w = boost::math::quantile(standard, u) / kernel.lengthscales()(k);
      frequencies_(2 * j, k) = w;
      frequencies_(2 * j + 1, k) = w;
    }
    phases_(2 * j) = 0.0;
    phases_(2 * j + 1) = -0.5 * std::numbers::pi;
  }
  amplitude_ = std::sqrt(kernel.output_scale() / pairs);
}

Eigen::VectorXd RandomFeatureMap::features(const Point& x) const {
  if (x.size() != dim()) throw InvalidInput("feature map dimension mismatch");
  return amplitude_ * ((frequencies_ * x).array() + phases_.array()).cos().matrix();
}

Eigen::MatrixXd RandomFeatureMap::jacobian(const Point& x) const {
  if (x.size() != dim()) throw InvalidInput("feature map dimension mismatch");
  const Eigen::ArrayXd s = -amplitude_ * ((frequencies_ * x).array() + phases_.array()).sin();
  return frequencies_.array().colwise() * s;
}

FeaturePosterior FeaturePosterior::fit(std::shared_ptr<const RandomFeatureMap> map, const PointList& inputs,
                                       const Labels& labels, const ConfidenceSettings& settings) {
  if (!map) throw InvalidInput("feature posterior needs a feature map");
  settings.validate();
  if (inputs.size() != labels.size()) throw InvalidInput("number of labels does not match number of inputs");
  check_binary_labels(labels);
  const int nf = map->num_features();
  Eigen::MatrixXd a = settings.lambda * Eigen::MatrixXd::Identity(nf, nf);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Eigen::VectorXd phi = map->features(inputs[i]);
    a.selfadjointView<Eigen::Lower>().rankUpdate(phi);
    rhs += labels[i] * phi;
  }
  a = a.selfadjointView<Eigen::Lower>();
  FeaturePosterior post;
  post.map_ = std::move(map);
  post.precision_.compute(a);
  if (post.precision_.info() != Eigen::Success) throw NumericalError("feature-space precision matrix is not positive definite");
  post.weights_ = post.precision_.solve(rhs);
  post.settings_ = settings;
  post.count_ = inputs.size();
  const Eigen::MatrixXd l = post.precision_.matrixL();
  post.log_det_ratio_ = 2.0 * l.diagonal().array().log().sum() - nf * std::log(settings.lambda);
  return post;
}

double FeaturePosterior::mean(const Point& x) const { return map_->features(x).dot(weights_); }

Eigen::VectorXd FeaturePosterior::mean_grad(const Point& x) const {
  return map_->jacobian(x).transpose() * weights_;
}

double FeaturePosterior::variance(const Point& x) const {
  const Eigen::VectorXd phi = map_->features(x);
  return clamp_variance(settings_.lambda * phi.dot(precision_.solve(phi)));
}

Eigen::VectorXd FeaturePosterior::variance_grad(const Point& x) const {
  const Eigen::VectorXd phi = map_->features(x);
  return 2.0 * settings_.lambda * map_->jacobian(x).transpose() * precision_.solve(phi);
}

}  // namespace bore
