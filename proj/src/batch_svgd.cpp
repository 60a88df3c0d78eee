#include "bore/batch_svgd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bore/errors.hpp"

namespace bore {

std::string to_string(StepRule rule) { return rule == StepRule::Adaptive ? "adaptive" : "plain"; }

StepRule step_rule_from_string(const std::string& name) {
  if (name == "adaptive") return StepRule::Adaptive;
  if (name == "plain") return StepRule::Plain;
  throw InvalidInput("unknown SVGD step rule '" + name + "'");
}

void SvgdSettings::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) throw InvalidInput("SVGD step size must be positive");
  if (!(decay > 0.0 && decay <= 1.0)) throw InvalidInput("SVGD decay must lie in (0, 1]");
  if (steps < 0) throw InvalidInput("SVGD step count must be non-negative");
  if (!(epsilon_floor > 0.0)) throw InvalidInput("SVGD epsilon floor must be positive");
}

ParticleSet::ParticleSet(PointList particles_in, Eigen::VectorXd lower_in, Eigen::VectorXd upper_in,
                         SvgdSettings settings_in)
    : particles(std::move(particles_in)), lower(std::move(lower_in)), upper(std::move(upper_in)),
      settings(settings_in) {
  settings.validate();
  if (particles.empty()) throw InvalidInput("SVGD needs at least one particle");
  if (lower.size() != upper.size() || (lower.array() > upper.array()).any())
    throw InvalidInput("invalid SVGD projection box");
  for (auto& p : particles) {
    if (p.size() != lower.size()) throw InvalidInput("particle dimension does not match box");
    p = project(p);
  }
  squared_grad_avg.assign(particles.size(), Eigen::VectorXd::Zero(lower.size()));
}

Point ParticleSet::project(const Point& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

Kernel median_trick_kernel(const PointList& particles) {
  if (particles.empty()) throw InvalidInput("median trick needs particles");
  const int d = static_cast<int>(particles.front().size());
  const std::size_t m = particles.size();
  if (m == 1) return Kernel::isotropic(KernelFamily::SquaredExponential, 1.0, d);
  std::vector<double> sq;
  sq.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) sq.push_back((particles[i] - particles[j]).squaredNorm());
  const auto mid = sq.begin() + static_cast<std::ptrdiff_t>(sq.size() / 2);
  std::nth_element(sq.begin(), mid, sq.end());
  double med = *mid;
  if (sq.size() % 2 == 0) med = 0.5 * (med + *std::max_element(sq.begin(), mid));
  if (!(med > 0.0)) return Kernel::isotropic(KernelFamily::SquaredExponential, 1.0, d);
  const double h2 = med / (2.0 * std::log(static_cast<double>(m) + 1.0));
  return Kernel::isotropic(KernelFamily::SquaredExponential, std::sqrt(h2), d);
}

ParticleSet svgd_step(const ParticleSet& ps, const LogDensityTarget& target, const Kernel& svgd_kernel) {
  const std::size_t m = ps.size();
  std::vector<Eigen::VectorXd> scores(m);
  for (std::size_t j = 0; j < m; ++j) {
    scores[j] = target.grad_log_p(ps.particles[j]);
    if (!scores[j].allFinite()) {
      std::ostringstream msg;
      msg << "SVGD score gradient is not finite at particle " << j << " (iteration " << ps.iteration << ")";
      throw NumericalError(msg.str());
    }
  }
  ParticleSet next = ps;
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Point& x = ps.particles[i];
    Eigen::VectorXd zeta = Eigen::VectorXd::Zero(x.size());
    for (std::size_t j = 0; j < m; ++j) {
      const Point& xj = ps.particles[j];
      zeta += svgd_kernel.eval(xj, x) * scores[j] + svgd_kernel.eval_grad(xj, x);
    }
    zeta *= inv_m;
    Eigen::VectorXd delta;
    if (ps.settings.rule == StepRule::Adaptive) {
      auto& h = next.squared_grad_avg[i];
      const Eigen::VectorXd z2 = zeta.array().square();
      h = ps.iteration == 0 ? z2 : Eigen::VectorXd(ps.settings.decay * h + (1.0 - ps.settings.decay) * z2);
      delta = ps.settings.step_size * (zeta.array() / (1e-6 + h.array().sqrt())).matrix();
    } else {
      delta = ps.settings.step_size * std::pow(ps.settings.decay, ps.iteration) * zeta;
    }
    next.particles[i] = ps.project(x + delta);
  }
  ++next.iteration;
  return next;
}

ParticleSet svgd_step(const ParticleSet& ps, const LogDensityTarget& target) {
  return svgd_step(ps, target, median_trick_kernel(ps.particles));
}

ParticleSet run_svgd(ParticleSet ps, const LogDensityTarget& target) {
  const int steps = ps.settings.steps;
  for (int k = 0; k < steps; ++k) ps = svgd_step(ps, target);
  return ps;
}

LogDensityTarget ucb_log_target(const ClassifierModel& post, double epsilon_floor) {
  LogDensityTarget t;
  t.log_p = [&post, epsilon_floor](const Point& x) { return std::log(std::max(epsilon_floor, post.ucb_unclamped(x))); };
  t.grad_log_p = [&post, epsilon_floor](const Point& x) -> Eigen::VectorXd {
    const double u = post.ucb_unclamped(x);
    if (!(u > epsilon_floor)) return Eigen::VectorXd::Zero(x.size());
    return post.ucb_unclamped_grad(x) / u;
  };
  return t;
}

LogDensityTarget mean_log_target(const ClassifierModel& post, double epsilon_floor) {
  LogDensityTarget t;
  t.log_p = [&post, epsilon_floor](const Point& x) { return std::log(std::max(epsilon_floor, post.mean(x))); };
  t.grad_log_p = [&post, epsilon_floor](const Point& x) -> Eigen::VectorXd {
    const double u = post.mean(x);
    if (!(u > epsilon_floor)) return Eigen::VectorXd::Zero(x.size());
    return post.mean_grad(x) / u;
  };
  return t;
}

std::vector<double> batch_weights(const ClassifierModel& post, const SearchSpace& space, BatchScore score) {
  std::vector<double> w;
  w.reserve(space.size());
  double total = 0.0;
  for (const auto& p : space.points()) {
    const double raw = score == BatchScore::Ucb ? post.ucb(p) : std::clamp(post.mean(p), 0.0, 1.0);
    w.push_back(raw);
    total += raw;
  }
  if (!(total > 0.0)) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
    return w;
  }
  for (double& v : w) v /= total;
  return w;
}

Batch propose_batch(const ClassifierModel& post, const SearchSpace& space, int batch_size,
                    const SvgdSettings& settings, Rng& rng, BatchScore score) {
  if (batch_size <= 0) throw InvalidInput("batch size must be positive");
  settings.validate();
  Batch batch;
  if (space.is_finite()) {
    const auto w = batch_weights(post, space, score);
    std::vector<double> cdf(w.size());
    std::partial_sum(w.begin(), w.end(), cdf.begin());
    for (int m = 0; m < batch_size; ++m) {
      const double u = uniform01(rng) * cdf.back();
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), w.size() - 1);
      while (w[i] <= 0.0 && i > 0) --i;
      batch.indices.push_back(i);
      batch.points.push_back(space.points()[i]);
    }
    return batch;
  }
  PointList init;
  for (int m = 0; m < batch_size; ++m) init.push_back(space.sample_uniform(rng));
  ParticleSet ps(std::move(init), space.lower(), space.upper(), settings);
  const auto target = score == BatchScore::Ucb ? ucb_log_target(post, settings.epsilon_floor)
                                               : mean_log_target(post, settings.epsilon_floor);
  batch.points = run_svgd(std::move(ps), target).particles;
  return batch;
}

int count_duplicates(const PointList& points, double tolerance) {
  int dup = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if ((points[i] - points[j]).norm() <= tolerance) {
        ++dup;
        break;
      }
    }
  }
  return dup;
}

}  // namespace bore
