#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bore/kernels.hpp"
#include "bore/random.hpp"
#include "bore/search_space.hpp"

namespace bore {

enum class NoiseFamily { Gaussian, StudentT, Cauchy };

[[nodiscard]] std::string to_string(NoiseFamily family);
[[nodiscard]] NoiseFamily noise_family_from_string(const std::string& name);

/// Zero-centred additive noise with a strictly monotone CDF on R.
class NoiseModel {
 public:
  static NoiseModel gaussian(double stddev);
  static NoiseModel student_t(double dof, double scale);
  static NoiseModel cauchy(double scale);

  [[nodiscard]] double cdf(double e) const;
  [[nodiscard]] double inverse_cdf(double p) const;
  [[nodiscard]] double pdf(double e) const;
  /// d/dp inverse_cdf(p) = 1 / pdf(inverse_cdf(p)).
  [[nodiscard]] double inverse_cdf_derivative(double p) const;
  [[nodiscard]] double sample(Rng& rng) const;
  /// Variance if finite.
  [[nodiscard]] std::optional<double> variance() const;

  [[nodiscard]] NoiseFamily family() const noexcept { return family_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] double dof() const noexcept { return dof_; }

  bool operator==(const NoiseModel&) const = default;

 private:
  NoiseModel(NoiseFamily family, double scale, double dof);

  NoiseFamily family_;
  double scale_;
  double dof_;
};

/// sup of d/dp inverse_cdf over [lo, hi]; requires 0 < lo <= hi < 1.
[[nodiscard]] double lipschitz_of_inverse_cdf(const NoiseModel& noise, double lo, double hi);

/// Exact quantities available for synthetic finite-domain objectives.
struct FiniteGroundTruth {
  std::vector<double> pi_star;  // per domain point
  std::vector<double> f;        // per domain point
  double tau = 0.0;
  double gamma = 0.0;           // mean of pi_star over the domain
  std::size_t argmin = 0;
  double pi_norm = 0.0;         // ||pi*||_k
};

/// Black-box objective f to be minimised, observed through `observe`.
class Objective {
 public:
  virtual ~Objective() = default;

  [[nodiscard]] virtual const SearchSpace& space() const = 0;
  /// Noise-free f(x); throws InvalidInput outside the domain.
  [[nodiscard]] virtual double value(const Point& x) const = 0;
  /// f(x) + eps, eps drawn from `rng` (or 0 in noise-free mode).
  [[nodiscard]] virtual double observe(const Point& x, Rng& rng) const = 0;
  [[nodiscard]] virtual double min_value() const = 0;
  [[nodiscard]] virtual Point min_location() const = 0;
  [[nodiscard]] virtual const FiniteGroundTruth* ground_truth() const { return nullptr; }
};

/// pi* = sum_i alpha_i k(., c_i) with ||pi*||_k = 1 and f = tau - Phi_eps^-1(pi*),
/// on a finite domain of uniformly sampled points.
class SyntheticObjective final : public Objective {
 public:
  SyntheticObjective(PointList centers, Eigen::VectorXd weights, Kernel kernel, double tau, NoiseModel noise,
                     PointList domain);

  [[nodiscard]] const SearchSpace& space() const override { return domain_; }
  [[nodiscard]] double value(const Point& x) const override;
  [[nodiscard]] double observe(const Point& x, Rng& rng) const override;
  [[nodiscard]] double observe_index(std::size_t i, Rng& rng) const;
  [[nodiscard]] double min_value() const override { return truth_.f[truth_.argmin]; }
  [[nodiscard]] Point min_location() const override { return domain_.points()[truth_.argmin]; }
  [[nodiscard]] const FiniteGroundTruth* ground_truth() const override { return &truth_; }

  /// pi*(x) at any point, not only domain points.
  [[nodiscard]] double pi_star(const Point& x) const;
  /// tau - Phi^-1(pi*(x)) at any point; -inf where pi*(x) = 1.
  [[nodiscard]] double f_at(const Point& x) const;

  [[nodiscard]] const PointList& centers() const noexcept { return centers_; }
  [[nodiscard]] const Eigen::VectorXd& weights() const noexcept { return weights_; }
  [[nodiscard]] const Kernel& kernel() const noexcept { return kernel_; }
  [[nodiscard]] const NoiseModel& noise() const noexcept { return noise_; }
  [[nodiscard]] double tau() const noexcept { return tau_; }
  /// max over the domain of 1 / pi*(x).
  [[nodiscard]] double l_pi() const;

 private:
  PointList centers_;
  Eigen::VectorXd weights_;
  Kernel kernel_;
  double tau_;
  NoiseModel noise_;
  SearchSpace domain_;
  FiniteGroundTruth truth_;
};

/// Random RKHS classifier objective: F centers and N_X domain points uniform on [0,1]^d
/// (d = kernel.dim()), weights uniform on [0,1] normalised to unit RKHS norm.
[[nodiscard]] SyntheticObjective generate_synthetic(std::uint64_t seed, int num_centers, const Kernel& kernel,
                                                    double tau, const NoiseModel& noise, int domain_size);

enum class AnalyticFunction { Rosenbrock, Hartmann3, SixHumpCamel, Sphere };

[[nodiscard]] std::string to_string(AnalyticFunction fn);
[[nodiscard]] AnalyticFunction analytic_function_from_string(const std::string& name);

/// Standard global-optimisation test function on its usual box.
class AnalyticObjective final : public Objective {
 public:
  AnalyticObjective(AnalyticFunction fn, int dim, std::optional<NoiseModel> noise = std::nullopt);

  [[nodiscard]] const SearchSpace& space() const override { return box_; }
  [[nodiscard]] double value(const Point& x) const override;
  [[nodiscard]] double observe(const Point& x, Rng& rng) const override;
  [[nodiscard]] double min_value() const override { return min_value_; }
  [[nodiscard]] Point min_location() const override { return min_location_; }

  [[nodiscard]] AnalyticFunction function() const noexcept { return fn_; }
  [[nodiscard]] static double evaluate(AnalyticFunction fn, const Point& x);

 private:
  AnalyticFunction fn_;
  std::optional<NoiseModel> noise_;
  SearchSpace box_;
  double min_value_;
  Point min_location_;
};

}  // namespace bore
