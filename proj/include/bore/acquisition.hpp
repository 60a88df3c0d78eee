#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>

#include "bore/linalg.hpp"
#include "bore/pls_classifier.hpp"
#include "bore/search_space.hpp"

namespace bore {

/// Kernel ridge / GP regression posterior over real-valued targets; the same
/// closed form as the classifier with y in place of z.
class GPRegressor {
 public:
  /// Prior state (no data).
  GPRegressor(Kernel kernel, ConfidenceSettings settings);
  GPRegressor(std::shared_ptr<const RegularisedGram> gram, Eigen::VectorXd targets, ConfidenceSettings settings);

  [[nodiscard]] static GPRegressor fit(const Kernel& kernel, const PointList& inputs, const Eigen::VectorXd& targets,
                                       const ConfidenceSettings& settings);

  [[nodiscard]] double mean(const Point& x) const;
  [[nodiscard]] double variance(const Point& x) const;
  [[nodiscard]] double stddev(const Point& x) const;
  [[nodiscard]] Eigen::VectorXd mean_grad(const Point& x) const;
  [[nodiscard]] Eigen::VectorXd stddev_grad(const Point& x) const;

  /// Same schedule as the classifier: b + R sqrt(2/lambda (IG + log(1/delta))).
  [[nodiscard]] double beta() const;
  [[nodiscard]] double info_gain() const { return 0.5 * gram_->log_det_ratio(); }

  [[nodiscard]] std::size_t num_observations() const noexcept { return gram_->size(); }
  [[nodiscard]] const RegularisedGram& gram() const noexcept { return *gram_; }
  [[nodiscard]] const ConfidenceSettings& settings() const noexcept { return settings_; }

 private:
  [[nodiscard]] Eigen::MatrixXd kernel_jacobian(const Point& x) const;

  std::shared_ptr<const RegularisedGram> gram_;
  Eigen::VectorXd targets_;
  Eigen::VectorXd alpha_;
  ConfidenceSettings settings_;
};

/// Chosen point; `index` is set in finite mode.
struct Selection {
  Point point;
  std::optional<std::size_t> index;
  double score = 0.0;
};

/// Multi-start projected gradient ascent used in box mode.
struct BoxSearchSettings {
  int probes = 1024;  // low-discrepancy screening points
  int starts = 32;    // best probes refined by ascent
  int steps = 200;
  double initial_step = 0.1;  // fraction of the box diagonal

  bool operator==(const BoxSearchSettings&) const = default;
};

using ScoreFn = std::function<double(const Point&)>;
using ScoreGradFn = std::function<Eigen::VectorXd(const Point&)>;

/// Index of the maximum; ties go to the lowest index.
[[nodiscard]] std::size_t argmax_index(std::span<const double> scores);

[[nodiscard]] Selection argmax_finite(const ScoreFn& score, const SearchSpace& space);

[[nodiscard]] Selection maximise_box(const ScoreFn& score, const ScoreGradFn& grad, const SearchSpace& space,
                                     const BoxSearchSettings& settings = {});

/// argmax pi_hat
[[nodiscard]] Selection bore_select(const ClassifierModel& post, const SearchSpace& space,
                                    const BoxSearchSettings& settings = {});

/// argmax of the clamped UCB. Clamp ties are broken by the unclamped value, then index.
/// `score` in the result is the clamped UCB.
[[nodiscard]] Selection bore_pp_select(const ClassifierModel& post, const SearchSpace& space,
                                       const BoxSearchSettings& settings = {});

/// argmax -mu + beta sigma (lower confidence bound on f, since f is minimised).
[[nodiscard]] Selection gp_ucb_select(const GPRegressor& gp, const SearchSpace& space, double beta,
                                      const BoxSearchSettings& settings = {});

/// (tau - mu) Psi(s) + sigma psi(s), s = (tau - mu) / sigma; 0 where sigma = 0.
[[nodiscard]] double gp_ei(const GPRegressor& gp, const Point& x, double tau);
[[nodiscard]] Eigen::VectorXd gp_ei_grad(const GPRegressor& gp, const Point& x, double tau);

[[nodiscard]] Selection gp_ei_select(const GPRegressor& gp, const SearchSpace& space, double tau,
                                     const BoxSearchSettings& settings = {});

}  // namespace bore
