#include "bore/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/cauchy.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "bore/errors.hpp"

namespace bore {

std::string to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::Gaussian: return "gaussian";
    case NoiseFamily::StudentT: return "student_t";
    case NoiseFamily::Cauchy: return "cauchy";
  }
  return "unknown";
}

NoiseFamily noise_family_from_string(const std::string& name) {
  if (name == "gaussian") return NoiseFamily::Gaussian;
  if (name == "student_t") return NoiseFamily::StudentT;
  if (name == "cauchy") return NoiseFamily::Cauchy;
  throw InvalidInput("unknown noise family '" + name + "'");
}

NoiseModel::NoiseModel(NoiseFamily family, double scale, double dof) : family_(family), scale_(scale), dof_(dof) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw InvalidInput("noise scale must be positive");
  if (family_ == NoiseFamily::StudentT && !(dof_ > 0.0)) throw InvalidInput("Student-t degrees of freedom must be positive");
}

NoiseModel NoiseModel::gaussian(double stddev) { return NoiseModel(NoiseFamily::Gaussian, stddev, 0.0); }
NoiseModel NoiseModel::student_t(double dof, double scale) { return NoiseModel(NoiseFamily::StudentT, scale, dof); }
NoiseModel NoiseModel::cauchy(double scale) { return NoiseModel(NoiseFamily::Cauchy, scale, 0.0); }

double NoiseModel::cdf(double e) const {
  if (std::isinf(e)) return e > 0 ? 1.0 : 0.0;
  switch (family_) {
    case NoiseFamily::Gaussian: return boost::math::cdf(boost::math::normal(0.0, scale_), e);
    case NoiseFamily::StudentT: return boost::math::cdf(boost::math::students_t(dof_), e / scale_);
    case NoiseFamily::Cauchy: return boost::math::cdf(boost::math::cauchy(0.0, scale_), e);
  }
  return 0.0;
}

double NoiseModel::inverse_cdf(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("probability outside [0, 1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  switch (family_) {
    case NoiseFamily::Gaussian: return boost::math::quantile(boost::math::normal(0.0, scale_), p);
    case NoiseFamily::StudentT: return scale_ * boost::math::quantile(boost::math::students_t(dof_), p);
    case NoiseFamily::Cauchy: return boost::math::quantile(boost::math::cauchy(0.0, scale_), p);
  }
  return 0.0;
}

double NoiseModel::pdf(double e) const {
  if (std::isinf(e)) return 0.0;
  switch (family_) {
    case NoiseFamily::Gaussian: return boost::math::pdf(boost::math::normal(0.0, scale_), e);
    case NoiseFamily::StudentT: return boost::math::pdf(boost::math::students_t(dof_), e / scale_) / scale_;
    case NoiseFamily::Cauchy: return boost::math::pdf(boost::math::cauchy(0.0, scale_), e);
  }
  return 0.0;
}

double NoiseModel::inverse_cdf_derivative(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("inverse CDF derivative needs p in (0, 1)");
  return 1.0 / pdf(inverse_cdf(p));
}

double NoiseModel::sample(Rng& rng) const {
  // Midpoint of a 2^-53 cell, so the probability is strictly inside (0, 1).
  const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  return inverse_cdf(u);
}

std::optional<double> NoiseModel::variance() const {
  switch (family_) {
    case NoiseFamily::Gaussian: return scale_ * scale_;
    case NoiseFamily::StudentT:
      if (dof_ > 2.0) return scale_ * scale_ * dof_ / (dof_ - 2.0);
      return std::nullopt;
    case NoiseFamily::Cauchy: return std::nullopt;
  }
  return std::nullopt;
}

double lipschitz_of_inverse_cdf(const NoiseModel& noise, double lo, double hi) {
  if (!(lo > 0.0 && lo <= hi && hi < 1.0)) {
    std::ostringstream msg;
    msg << "Lipschitz range [" << lo << ", " << hi << "] must satisfy 0 < lo <= hi < 1";
    throw InvalidInput(msg.str());
  }
  // All supported families are symmetric and unimodal, so the derivative is
  // largest at the endpoint farther from the median.
  return std::max(noise.inverse_cdf_derivative(lo), noise.inverse_cdf_derivative(hi));
}

SyntheticObjective::SyntheticObjective(PointList centers, Eigen::VectorXd weights, Kernel kernel, double tau,
                                       NoiseModel noise, PointList domain)
    : centers_(std::move(centers)),
      weights_(std::move(weights)),
      kernel_(std::move(kernel)),
      tau_(tau),
      noise_(std::move(noise)),
      domain_(SearchSpace::finite(std::move(domain))) {
  if (centers_.empty()) throw InvalidInput("synthetic objective needs at least one center");
  if (static_cast<std::size_t>(weights_.size()) != centers_.size()) throw InvalidInput("one weight per center required");
  if (domain_.dim() != kernel_.dim()) throw InvalidInput("domain dimension does not match kernel");
  const Eigen::MatrixXd kf = build_gram(kernel_, centers_).entries;
  truth_.pi_norm = std::sqrt(std::max(0.0, weights_.dot(kf * weights_)));
  truth_.tau = tau_;
  const auto& pts = domain_.points();
  double total = 0.0;
  for (const auto& x : pts) {
    const double p = pi_star(x);
    truth_.pi_star.push_back(p);
    truth_.f.push_back(tau_ - noise_.inverse_cdf(std::clamp(p, 0.0, 1.0)));
    total += p;
  }
  truth_.gamma = total / static_cast<double>(pts.size());
  truth_.argmin = static_cast<std::size_t>(std::min_element(truth_.f.begin(), truth_.f.end()) - truth_.f.begin());
}

double SyntheticObjective::pi_star(const Point& x) const { return kernel_vector(kernel_, centers_, x).dot(weights_); }

double SyntheticObjective::f_at(const Point& x) const {
  return tau_ - noise_.inverse_cdf(std::clamp(pi_star(x), 0.0, 1.0));
}

double SyntheticObjective::value(const Point& x) const {
  const long i = domain_.index_of(x);
  if (i < 0) throw InvalidInput("point is not in the synthetic objective's domain");
  return truth_.f[static_cast<std::size_t>(i)];
}

double SyntheticObjective::observe(const Point& x, Rng& rng) const { return value(x) + noise_.sample(rng); }

double SyntheticObjective::observe_index(std::size_t i, Rng& rng) const {
  if (i >= truth_.f.size()) throw InvalidInput("domain index out of range");
  return truth_.f[i] + noise_.sample(rng);
}

double SyntheticObjective::l_pi() const {
  double best = 0.0;
  for (double p : truth_.pi_star) best = std::max(best, 1.0 / p);
  return best;
}

SyntheticObjective generate_synthetic(std::uint64_t seed, int num_centers, const Kernel& kernel, double tau,
                                      const NoiseModel& noise, int domain_size) {
  if (num_centers < 1) throw InvalidInput("synthetic objective needs F >= 1 centers");
  if (domain_size < 2) throw InvalidInput("synthetic objective needs N_X >= 2 domain points");
  Rng rng = make_rng(seed, Stream::Objective);
  const int d = kernel.dim();
  auto draw_point = [&] {
    Point p(d);
    for (int k = 0; k < d; ++k) p(k) = uniform01(rng);
    return p;
  };
  for (int attempt = 0; attempt < 1000; ++attempt) {
    PointList centers;
    for (int i = 0; i < num_centers; ++i) centers.push_back(draw_point());
    Eigen::VectorXd alpha(num_centers);
    for (int i = 0; i < num_centers; ++i) alpha(i) = uniform01(rng);
    const double norm2 = alpha.dot(build_gram(kernel, centers).entries * alpha);
    PointList domain;
    for (int i = 0; i < domain_size; ++i) domain.push_back(draw_point());
    if (!(norm2 > 0.0)) continue;
    alpha /= std::sqrt(norm2);
    SyntheticObjective obj(std::move(centers), std::move(alpha), kernel, tau, noise, std::move(domain));
    const auto& pi = obj.ground_truth()->pi_star;
    if (std::all_of(pi.begin(), pi.end(), [](double p) { return p > 0.0 && p < 1.0; })) return obj;
  }
  throw NumericalError("could not generate a synthetic objective with pi* inside (0, 1)");
}

std::string to_string(AnalyticFunction fn) {
  switch (fn) {
    case AnalyticFunction::Rosenbrock: return "rosenbrock";
    case AnalyticFunction::Hartmann3: return "hartmann3";
    case AnalyticFunction::SixHumpCamel: return "six_hump_camel";
    case AnalyticFunction::Sphere: return "sphere";
  }
  return "unknown";
}

AnalyticFunction analytic_function_from_string(const std::string& name) {
  if (name == "rosenbrock") return AnalyticFunction::Rosenbrock;
  if (name == "hartmann3") return AnalyticFunction::Hartmann3;
  if (name == "six_hump_camel") return AnalyticFunction::SixHumpCamel;
  if (name == "sphere") return AnalyticFunction::Sphere;
  throw InvalidInput("unknown analytic function '" + name + "'");
}

namespace {

constexpr double kHartmannA[4][3] = {{3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}, {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}};
constexpr double kHartmannC[4] = {1.0, 1.2, 3.0, 3.2};
constexpr double kHartmannP[4][3] = {{0.3689, 0.1170, 0.2673},
                                     {0.4699, 0.4387, 0.7470},
                                     {0.1091, 0.8732, 0.5547},
                                     {0.0381, 0.5743, 0.8828}};

int required_dim(AnalyticFunction fn, int dim) {
  switch (fn) {
    case AnalyticFunction::Hartmann3:
      if (dim != 3) throw InvalidInput("Hartmann3 is defined in dimension 3");
      return 3;
    case AnalyticFunction::SixHumpCamel:
      if (dim != 2) throw InvalidInput("six-hump camel is defined in dimension 2");
      return 2;
    case AnalyticFunction::Rosenbrock:
      if (dim < 2) throw InvalidInput("Rosenbrock needs dimension >= 2");
      return dim;
    case AnalyticFunction::Sphere:
      if (dim < 1) throw InvalidInput("sphere needs dimension >= 1");
      return dim;
  }
  return dim;
}

SearchSpace analytic_box(AnalyticFunction fn, int d) {
  switch (fn) {
    case AnalyticFunction::Rosenbrock:
      return SearchSpace::box(Eigen::VectorXd::Constant(d, -2.0), Eigen::VectorXd::Constant(d, 2.0));
    case AnalyticFunction::Hartmann3:
      return SearchSpace::box(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(3));
    case AnalyticFunction::SixHumpCamel:
      return SearchSpace::box(Eigen::Vector2d(-3.0, -2.0), Eigen::Vector2d(3.0, 2.0));
    case AnalyticFunction::Sphere:
      return SearchSpace::box(Eigen::VectorXd::Constant(d, -5.12), Eigen::VectorXd::Constant(d, 5.12));
  }
  throw InvalidInput("unknown analytic function");
}

Point analytic_min_location(AnalyticFunction fn, int d) {
  switch (fn) {
    case AnalyticFunction::Rosenbrock: return Eigen::VectorXd::Ones(d);
    case AnalyticFunction::Hartmann3:
      return Eigen::Vector3d(0.11458886908541062, 0.5556488928322367, 0.8525469854282611);
    case AnalyticFunction::SixHumpCamel: return Eigen::Vector2d(0.0898420131003, -0.7126564030207);
    case AnalyticFunction::Sphere: return Eigen::VectorXd::Zero(d);
  }
  return Eigen::VectorXd::Zero(d);
}

}  // namespace

double AnalyticObjective::evaluate(AnalyticFunction fn, const Point& x) {
  switch (fn) {
    case AnalyticFunction::Rosenbrock: {
      if (x.size() < 2) throw InvalidInput("Rosenbrock needs dimension >= 2");
      double s = 0.0;
      for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
        const double a = x(i + 1) - x(i) * x(i);
        const double b = 1.0 - x(i);
        s += 100.0 * a * a + b * b;
      }
      return s;
    }
    case AnalyticFunction::Hartmann3: {
      if (x.size() != 3) throw InvalidInput("Hartmann3 needs dimension 3");
      double s = 0.0;
      for (int i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (int j = 0; j < 3; ++j) inner += kHartmannA[i][j] * (x(j) - kHartmannP[i][j]) * (x(j) - kHartmannP[i][j]);
        s -= kHartmannC[i] * std::exp(-inner);
      }
      return s;
    }
    case AnalyticFunction::SixHumpCamel: {
      if (x.size() != 2) throw InvalidInput("six-hump camel needs dimension 2");
      const double a = x(0) * x(0);
      const double b = x(1) * x(1);
      return (4.0 - 2.1 * a + a * a / 3.0) * a + x(0) * x(1) + (-4.0 + 4.0 * b) * b;
    }
    case AnalyticFunction::Sphere:
      return x.squaredNorm();
  }
  return 0.0;
}

AnalyticObjective::AnalyticObjective(AnalyticFunction fn, int dim, std::optional<NoiseModel> noise)
    : fn_(fn),
      noise_(std::move(noise)),
      box_(analytic_box(fn, required_dim(fn, dim))),
      min_location_(analytic_min_location(fn, required_dim(fn, dim))) {
  min_value_ = evaluate(fn_, min_location_);
}

double AnalyticObjective::value(const Point& x) const {
  if (!box_.contains(x)) throw InvalidInput("point outside the objective's box");
  return evaluate(fn_, x);
}

double AnalyticObjective::observe(const Point& x, Rng& rng) const {
  const double v = value(x);
  return noise_ ? v + noise_->sample(rng) : v;
}

}  // namespace bore
