#include "bore/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "bore/errors.hpp"

namespace bore {

GPRegressor::GPRegressor(Kernel kernel, ConfidenceSettings settings)
    : GPRegressor(std::make_shared<const RegularisedGram>(std::move(kernel), settings.lambda), Eigen::VectorXd(0),
                  settings) {}

GPRegressor::GPRegressor(std::shared_ptr<const RegularisedGram> gram, Eigen::VectorXd targets,
                         ConfidenceSettings settings)
    : gram_(std::move(gram)), targets_(std::move(targets)), settings_(settings) {
  if (!gram_) throw InvalidInput("GP needs a Gram factor");
  settings_.validate();
  if (gram_->lambda() != settings_.lambda) throw InvalidInput("Gram factor lambda differs from settings lambda");
  if (static_cast<std::size_t>(targets_.size()) != gram_->size())
    throw InvalidInput("number of targets does not match number of inputs");
  if (!targets_.allFinite()) throw InvalidInput("GP targets must be finite");
  alpha_ = gram_->solve(targets_);
}

GPRegressor GPRegressor::fit(const Kernel& kernel, const PointList& inputs, const Eigen::VectorXd& targets,
                             const ConfidenceSettings& settings) {
  settings.validate();
  return GPRegressor(std::make_shared<const RegularisedGram>(kernel, settings.lambda, inputs), targets, settings);
}

Eigen::MatrixXd GPRegressor::kernel_jacobian(const Point& x) const {
  const auto& in = gram_->inputs();
  Eigen::MatrixXd j(in.size(), x.size());
  for (std::size_t i = 0; i < in.size(); ++i) j.row(i) = gram_->kernel().eval_grad(x, in[i]).transpose();
  return j;
}

double GPRegressor::mean(const Point& x) const {
  if (num_observations() == 0) return 0.0;
  return gram_->kernel_column(x).dot(alpha_);
}

double GPRegressor::variance(const Point& x) const {
  const double prior = gram_->kernel().diag();
  if (num_observations() == 0) return prior;
  const double raw = prior - gram_->forward(gram_->kernel_column(x)).squaredNorm();
  if (raw < -kVarianceRoundoff) {
    std::ostringstream msg;
    msg << "GP posterior variance " << raw << " is negative beyond roundoff";
    throw NumericalError(msg.str());
  }
  return std::max(0.0, raw);
}

double GPRegressor::stddev(const Point& x) const { return std::sqrt(variance(x)); }

Eigen::VectorXd GPRegressor::mean_grad(const Point& x) const {
  if (num_observations() == 0) return Eigen::VectorXd::Zero(x.size());
  return kernel_jacobian(x).transpose() * alpha_;
}

Eigen::VectorXd GPRegressor::stddev_grad(const Point& x) const {
  const double sd = stddev(x);
  if (num_observations() == 0 || sd <= 0.0) return Eigen::VectorXd::Zero(x.size());
  const Eigen::VectorXd v = gram_->solve(gram_->kernel_column(x));
  return -(kernel_jacobian(x).transpose() * v) / sd;
}

double GPRegressor::beta() const {
  if (settings_.fixed_beta) return *settings_.fixed_beta;
  const double inner = info_gain() + std::log(1.0 / settings_.delta);
  return settings_.norm_bound + settings_.noise_subgaussian * std::sqrt(2.0 / settings_.lambda * inner);
}

std::size_t argmax_index(std::span<const double> scores) {
  if (scores.empty()) throw InvalidInput("argmax of an empty score list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

namespace {

std::vector<double> score_all(const ScoreFn& score, const SearchSpace& space) {
  std::vector<double> s;
  s.reserve(space.size());
  for (const auto& p : space.points()) {
    const double v = score(p);
    if (std::isnan(v)) throw NumericalError("acquisition score is NaN");
    s.push_back(v);
  }
  return s;
}

}  // namespace

Selection argmax_finite(const ScoreFn& score, const SearchSpace& space) {
  const auto s = score_all(score, space);
  const std::size_t i = argmax_index(s);
  return {space.points()[i], i, s[i]};
}

Selection maximise_box(const ScoreFn& score, const ScoreGradFn& grad, const SearchSpace& space,
                       const BoxSearchSettings& settings) {
  if (space.is_finite()) return argmax_finite(score, space);
  if (settings.probes < 1 || settings.starts < 1 || settings.steps < 0 || !(settings.initial_step > 0.0))
    throw InvalidInput("invalid box search settings");
  const Eigen::VectorXd lo = space.lower();
  const Eigen::VectorXd width = space.upper() - lo;
  const double diag = std::max(width.norm(), 1e-300);

  PointList probes;
  std::vector<double> values;
  for (const auto& u : halton(settings.probes, space.dim())) {
    Point x = lo + (u.array() * width.array()).matrix();
    values.push_back(score(x));
    probes.push_back(std::move(x));
  }
  std::vector<std::size_t> order(probes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  const std::size_t starts = std::min<std::size_t>(settings.starts, order.size());

  Point best_x = probes[order[0]];
  double best = values[order[0]];
  for (std::size_t s = 0; s < starts; ++s) {
    Point x = probes[order[s]];
    double fx = values[order[s]];
    double step = settings.initial_step * diag;
    for (int k = 0; k < settings.steps; ++k) {
      const Eigen::VectorXd g = grad(x);
      const double gn = g.norm();
      if (!(gn > 0.0) || !std::isfinite(gn)) break;
      const Point cand = space.project(x + (step / gn) * g);
      const double fc = score(cand);
      if (fc > fx) {
        x = cand;
        fx = fc;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
      if (step < 1e-12 * diag) break;
    }
    if (fx > best) {
      best = fx;
      best_x = x;
    }
  }
  return {best_x, std::nullopt, best};
}

Selection bore_select(const ClassifierModel& post, const SearchSpace& space, const BoxSearchSettings& settings) {
  return maximise_box([&](const Point& x) { return post.mean(x); }, [&](const Point& x) { return post.mean_grad(x); },
                      space, settings);
}

Selection bore_pp_select(const ClassifierModel& post, const SearchSpace& space, const BoxSearchSettings& settings) {
  // The clamp is monotone, so the unclamped maximiser is also a clamped maximiser and
  // resolves ties on the clamp plateaus.
  Selection sel = maximise_box([&](const Point& x) { return post.ucb_unclamped(x); },
                               [&](const Point& x) { return post.ucb_unclamped_grad(x); }, space, settings);
  sel.score = std::min(1.0, std::max(0.0, sel.score));
  return sel;
}

Selection gp_ucb_select(const GPRegressor& gp, const SearchSpace& space, double beta,
                        const BoxSearchSettings& settings) {
  return maximise_box([&](const Point& x) { return -gp.mean(x) + beta * gp.stddev(x); },
                      [&](const Point& x) -> Eigen::VectorXd { return -gp.mean_grad(x) + beta * gp.stddev_grad(x); },
                      space, settings);
}

double gp_ei(const GPRegressor& gp, const Point& x, double tau) {
  const double sd = gp.stddev(x);
  if (sd <= 0.0) return 0.0;
  const double mu = gp.mean(x);
  const double s = (tau - mu) / sd;
  const boost::math::normal standard;
  return (tau - mu) * boost::math::cdf(standard, s) + sd * boost::math::pdf(standard, s);
}

Eigen::VectorXd gp_ei_grad(const GPRegressor& gp, const Point& x, double tau) {
  const double sd = gp.stddev(x);
  if (sd <= 0.0) return Eigen::VectorXd::Zero(x.size());
  const double s = (tau - gp.mean(x)) / sd;
  const boost::math::normal standard;
  return -boost::math::cdf(standard, s) * gp.mean_grad(x) + boost::math::pdf(standard, s) * gp.stddev_grad(x);
}

Selection gp_ei_select(const GPRegressor& gp, const SearchSpace& space, double tau, const BoxSearchSettings& settings) {
  return maximise_box([&](const Point& x) { return gp_ei(gp, x, tau); },
                      [&](const Point& x) { return gp_ei_grad(gp, x, tau); }, space, settings);
}

}  // namespace bore
