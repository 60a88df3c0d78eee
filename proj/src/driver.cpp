#include "bore/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "bore/errors.hpp"
#include "bore/feature_map.hpp"
#include "bore/labeling.hpp"
#include "bore/linalg.hpp"

namespace bore {

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::BorePLS: return "bore_pls";
    case Algorithm::BorePP: return "bore_pp";
    case Algorithm::GpUcb: return "gp_ucb";
    case Algorithm::GpEi: return "gp_ei";
    case Algorithm::Random: return "random";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (auto a : {Algorithm::BorePLS, Algorithm::BorePP, Algorithm::GpUcb, Algorithm::GpEi, Algorithm::Random})
    if (to_string(a) == name) return a;
  throw InvalidInput("unknown algorithm '" + name + "'");
}

std::string to_string(ClassifierBackend backend) {
  return backend == ClassifierBackend::Kernel ? "kernel" : "random_features";
}

ClassifierBackend classifier_backend_from_string(const std::string& name) {
  if (name == "kernel") return ClassifierBackend::Kernel;
  if (name == "random_features") return ClassifierBackend::RandomFeatures;
  throw InvalidInput("unknown classifier backend '" + name + "'");
}

Kernel KernelConfig::make(int dim) const {
  Eigen::VectorXd ls(dim);
  if (lengthscales.size() == 1) {
    ls.setConstant(lengthscales.front());
  } else if (static_cast<int>(lengthscales.size()) == dim) {
    for (int k = 0; k < dim; ++k) ls(k) = lengthscales[k];
  } else {
    std::ostringstream msg;
    msg << "kernel has " << lengthscales.size() << " lengthscales for a " << dim << "-dimensional space";
    throw InvalidInput(msg.str());
  }
  return Kernel(family, ls, output_scale, rq_alpha);
}

NoiseModel NoiseConfig::make() const {
  switch (family) {
    case NoiseFamily::Gaussian: return NoiseModel::gaussian(scale);
    case NoiseFamily::StudentT: return NoiseModel::student_t(dof, scale);
    case NoiseFamily::Cauchy: return NoiseModel::cauchy(scale);
  }
  throw InvalidInput("unknown noise family");
}

namespace {

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

void validate_kernel(const KernelConfig& k, const std::string& prefix) {
  require(!k.lengthscales.empty(), prefix + ".lengthscales", "must contain at least one value");
  for (double l : k.lengthscales) require(l > 0.0 && std::isfinite(l), prefix + ".lengthscales", "must be positive");
  require(k.output_scale > 0.0 && std::isfinite(k.output_scale), prefix + ".output_scale", "must be positive");
  require(k.rq_alpha > 0.0, prefix + ".rq_alpha", "must be positive");
}

bool is_gp(Algorithm a) { return a == Algorithm::GpUcb || a == Algorithm::GpEi; }

}  // namespace

void RunConfig::validate() const {
  require(!name.empty(), "name", "must not be empty");
  require(gamma > 0.0 && gamma < 1.0, "gamma", "must lie in (0, 1)");
  require(!fixed_tau || std::isfinite(*fixed_tau), "fixed_tau", "must be finite");
  require(lambda > 0.0 && std::isfinite(lambda), "lambda", "must be positive");
  require(delta > 0.0 && delta < 1.0, "delta", "must lie in (0, 1)");
  require(!norm_bound || *norm_bound >= 0.0, "norm_bound", "must be non-negative");
  require(!fixed_beta || *fixed_beta >= 0.0, "fixed_beta", "must be non-negative");
  validate_kernel(kernel, "kernel");
  require(num_features >= 2 && num_features % 2 == 0, "num_features", "must be an even number >= 2");
  require(backend == ClassifierBackend::Kernel || kernel.family == KernelFamily::SquaredExponential, "backend",
          "random features require the squared_exponential kernel");
  require(gp.lambda > 0.0 && std::isfinite(gp.lambda), "gp.lambda", "must be positive");
  require(gp.delta > 0.0 && gp.delta < 1.0, "gp.delta", "must lie in (0, 1)");
  require(gp.noise_subgaussian >= 0.0, "gp.noise_subgaussian", "must be non-negative");
  require(!gp.norm_bound || *gp.norm_bound >= 0.0, "gp.norm_bound", "must be non-negative");
  require(!gp.fixed_beta || *gp.fixed_beta >= 0.0, "gp.fixed_beta", "must be non-negative");
  require(batch_size >= 1, "batch_size", "must be >= 1");
  require(batch_size == 1 || !is_gp(algorithm), "batch_size", "GP baselines are sequential only");
  require(budget >= 0, "budget", "must be non-negative");
  require(initial_points >= 0, "initial_points", "must be non-negative");
  const auto& o = objective;
  if (o.kind == ObjectiveConfig::Kind::Synthetic) {
    require(o.num_centers >= 1, "objective.num_centers", "must be >= 1");
    require(o.domain_size >= 2, "objective.domain_size", "must be >= 2");
    require(o.dim >= 1 && o.dim <= 30, "objective.dim", "must lie in 1..30");
    require(std::isfinite(o.tau), "objective.tau", "must be finite");
    require(!o.noise_free, "objective.noise_free", "synthetic objectives are defined through their noise model");
    if (o.kernel) validate_kernel(*o.kernel, "objective.kernel");
  } else {
    if (o.function == AnalyticFunction::Rosenbrock)
      require(o.dim >= 2 && o.dim <= 30, "objective.dim", "Rosenbrock needs dimension 2..30");
    if (o.function == AnalyticFunction::Sphere)
      require(o.dim >= 1 && o.dim <= 30, "objective.dim", "must lie in 1..30");
  }
  require(o.noise.scale > 0.0 && std::isfinite(o.noise.scale), "objective.noise.scale", "must be positive");
  require(o.noise.family != NoiseFamily::StudentT || o.noise.dof > 0.0, "objective.noise.dof", "must be positive");
  try {
    svgd.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError("svgd", e.what());
  }
  require(box_search.probes >= 1, "box_search.probes", "must be >= 1");
  require(box_search.starts >= 1, "box_search.starts", "must be >= 1");
  require(box_search.steps >= 0, "box_search.steps", "must be non-negative");
  require(box_search.initial_step > 0.0, "box_search.initial_step", "must be positive");
}

std::unique_ptr<Objective> make_objective(const RunConfig& config) {
  const auto& o = config.objective;
  const std::uint64_t seed = o.seed.value_or(config.seed);
  if (o.kind == ObjectiveConfig::Kind::Synthetic) {
    const Kernel k = o.kernel.value_or(config.kernel).make(o.dim);
    return std::make_unique<SyntheticObjective>(
        generate_synthetic(seed, o.num_centers, k, o.tau, o.noise.make(), o.domain_size));
  }
  std::optional<NoiseModel> noise;
  if (!o.noise_free) noise = o.noise.make();
  // objective.dim only applies to the functions of variable dimension.
  int dim = o.dim;
  if (o.function == AnalyticFunction::Hartmann3) dim = 3;
  if (o.function == AnalyticFunction::SixHumpCamel) dim = 2;
  return std::make_unique<AnalyticObjective>(o.function, dim, noise);
}

double epsilon_lipschitz(const FiniteGroundTruth& truth, const NoiseModel& noise) {
  if (truth.pi_star.empty()) throw InvalidInput("ground truth has no domain points");
  const auto [mn, mx] = std::minmax_element(truth.pi_star.begin(), truth.pi_star.end());
  if (!(*mn > 0.0 && *mx < 1.0)) throw InvalidInput("pi* must lie strictly inside (0, 1)");
  const double lo = std::max(*mn - 0.01, 0.5 * *mn);
  const double hi = std::min(*mx + 0.01, 0.5 * (1.0 + *mx));
  return lipschitz_of_inverse_cdf(noise, lo, hi);
}

double thm2_bound(std::span<const TrialRecord> records, double l_eps, double beta_T,
                  std::span<const double> sigma_star_trace) {
  if (records.empty()) return 0.0;
  const double T = static_cast<double>(records.size());
  const double xi = std::max(0.0, records.back().info_gain);
  const double star = std::accumulate(sigma_star_trace.begin(), sigma_star_trace.end(), 0.0);
  return l_eps * beta_T * (std::sqrt(4.0 * (T + 2.0) * xi) + star);
}

double thm3_bound(std::span<const TrialRecord> records, double l_eps, double beta_T) {
  if (records.empty()) return 0.0;
  const double T = static_cast<double>(records.size());
  const double xi = std::max(0.0, records.back().info_gain);
  return 4.0 * l_eps * beta_T * std::sqrt((T + 2.0) * xi);
}

DistributionalRegret distributional_regret(std::span<const double> weights, const FiniteGroundTruth& truth) {
  const std::size_t n = truth.pi_star.size();
  if (weights.size() != n) throw InvalidInput("one weight per domain point required");
  const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double lsum = std::accumulate(truth.pi_star.begin(), truth.pi_star.end(), 0.0);
  if (!(wsum > 0.0)) throw InvalidInput("proposal distribution has zero mass");
  if (!(lsum > 0.0)) throw InvalidInput("target distribution has zero mass");
  DistributionalRegret out;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw InvalidInput("weights must be non-negative");
    const double p = weights[i] / wsum;
    const double l = truth.pi_star[i] / lsum;
    out.regret += (p - l) * truth.f[i];
    if (p > 0.0) {
      if (!(l > 0.0)) throw InvalidInput("proposal puts mass where the target has none");
      out.kl += p * std::log(p / l);
    }
  }
  out.kl = std::max(0.0, out.kl);
  return out;
}

std::vector<double> index_histogram(std::span<const std::size_t> indices, std::size_t domain_size) {
  std::vector<double> h(domain_size, 0.0);
  if (indices.empty()) return h;
  const double w = 1.0 / static_cast<double>(indices.size());
  for (std::size_t i : indices) {
    if (i >= domain_size) throw InvalidInput("index outside the domain");
    h[i] += w;
  }
  return h;
}

namespace {

using Clock = std::chrono::steady_clock;

double beta_from(const ConfidenceSettings& s, double log_det) {
  if (s.fixed_beta) return *s.fixed_beta;
  return s.norm_bound + s.noise_subgaussian * std::sqrt(2.0 / s.lambda * (0.5 * log_det + std::log(1.0 / s.delta)));
}

double gram_variance(const RegularisedGram& gram, const Point& x) {
  const double prior = gram.kernel().diag();
  if (gram.size() == 0) return prior;
  return std::max(0.0, prior - gram.forward(gram.kernel_column(x)).squaredNorm());
}

// Mutable state shared by the sequential and batch loops.
class RunState {
 public:
  RunState(const RunConfig& config, const Objective& objective)
      : config_(config),
        objective_(objective),
        space_(objective.space()),
        kernel_(config.kernel.make(objective.space().dim())),
        truth_(objective.ground_truth()),
        obs_rng_(make_rng(config.seed, Stream::Observation)),
        policy_rng_(make_rng(config.seed, Stream::Policy)),
        init_rng_(make_rng(config.seed, Stream::Initial)) {
    config.validate();
    result_.config = config;
    result_.f_star = objective.min_value();

    double b = 1.0;
    if (truth_ != nullptr) b = truth_->pi_norm;
    cls_.lambda = config.lambda;
    cls_.norm_bound = config.norm_bound.value_or(b);
    cls_.delta = config.delta;
    cls_.noise_subgaussian = 1.0;
    cls_.fixed_beta = config.fixed_beta;
    result_.norm_bound = cls_.norm_bound;

    if (is_gp(config.algorithm)) {
      gp_.lambda = config.gp.lambda;
      gp_.delta = config.gp.delta;
      gp_.noise_subgaussian = config.gp.noise_subgaussian;
      gp_.fixed_beta = config.gp.fixed_beta;
      if (config.gp.norm_bound) {
        gp_.norm_bound = *config.gp.norm_bound;
      } else if (truth_ != nullptr) {
        const Eigen::Map<const Eigen::VectorXd> f(truth_->f.data(), static_cast<Eigen::Index>(truth_->f.size()));
        gp_.norm_bound = rkhs_norm_finite(kernel_, space_.points(), f);
      } else {
        gp_.norm_bound = 1.0;
      }
      result_.gp_norm_bound = gp_.norm_bound;
    }

    const auto& model = model_settings();
    gram_ = std::make_shared<RegularisedGram>(kernel_, model.lambda);

    if (config.backend == ClassifierBackend::RandomFeatures && !is_gp(config.algorithm))
      feature_map_ = std::make_shared<const RandomFeatureMap>(kernel_, config.num_features, config.seed);

    if (truth_ != nullptr) {
      if (const auto* syn = dynamic_cast<const SyntheticObjective*>(&objective)) {
        result_.l_eps = epsilon_lipschitz(*truth_, syn->noise());
        result_.l_pi = syn->l_pi();
      }
    }

    if (config.diagnostics) {
      if (space_.is_finite()) {
        diag_grid_ = space_.points();
      } else {
        const Eigen::VectorXd width = space_.upper() - space_.lower();
        for (const auto& u : halton(256, space_.dim()))
          diag_grid_.push_back(space_.lower() + (u.array() * width.array()).matrix());
      }
      prev_var_.assign(diag_grid_.size(), kernel_.diag());
    }
  }

  const ConfidenceSettings& model_settings() const { return is_gp(config_.algorithm) ? gp_ : cls_; }
  bool uses_features() const { return feature_map_ != nullptr; }

  void add_initial_points() {
    for (int i = 0; i < config_.initial_points; ++i) append(space_.sample_uniform(init_rng_), std::nullopt);
  }

  std::optional<double> current_tau() const {
    if (config_.fixed_tau) return *config_.fixed_tau;
    if (obs_.empty()) return std::nullopt;
    return quantile(obs_, config_.gamma);
  }

  Labels current_labels(const std::optional<double>& tau) const {
    if (tau) return labels(obs_, *tau);
    return Labels(obs_.size(), 0);
  }

  std::unique_ptr<ClassifierModel> classifier(const Labels& z) const {
    if (uses_features()) return std::make_unique<FeaturePosterior>(FeaturePosterior::fit(feature_map_, xs_, z, cls_));
    return std::make_unique<ClassifierPosterior>(gram_, z, cls_);
  }

  GPRegressor regressor() const {
    Eigen::VectorXd y(obs_.size());
    for (std::size_t i = 0; i < obs_.size(); ++i) y(i) = obs_.values()[i];
    return GPRegressor(gram_, y, gp_);
  }

  std::optional<double> sigma_star(const std::function<double(const Point&)>& sd) const {
    if (truth_ == nullptr) return std::nullopt;
    return sd(space_.points()[truth_->argmin]);
  }

  Point next_random() {
    if (!space_.is_finite()) return space_.sample_uniform(policy_rng_);
    if (perm_pos_ >= perm_.size()) {
      perm_.resize(space_.size());
      std::iota(perm_.begin(), perm_.end(), 0);
      for (std::size_t i = perm_.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(uniform01(policy_rng_) * static_cast<double>(i + 1));
        std::swap(perm_[i], perm_[std::min(j, i)]);
      }
      perm_pos_ = 0;
    }
    return space_.points()[perm_[perm_pos_++]];
  }

  // Observes x, appends it to the history and returns y.
  double append(const Point& x, std::optional<int> t) {
    double y = 0.0;
    try {
      y = objective_.observe(x, obs_rng_);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "objective evaluation failed";
      if (t) msg << " at iteration " << *t;
      msg << ": " << e.what();
      throw std::runtime_error(msg.str());
    }
    xs_.push_back(x);
    obs_.push_back(y);
    gram_->append(x);
    if (uses_features()) {
      const FeaturePosterior fp = FeaturePosterior::fit(feature_map_, xs_, Labels(xs_.size(), 0), cls_);
      feature_log_det_ = fp.log_det_ratio();
    }
    return y;
  }

  double log_det() const { return uses_features() ? feature_log_det_ : gram_->log_det_ratio(); }

  void check_variance() {
    if (!config_.diagnostics || uses_features()) return;
    auto& d = result_.diagnostics;
    d.checked = true;
    for (std::size_t i = 0; i < diag_grid_.size(); ++i) {
      const double v = gram_variance(*gram_, diag_grid_[i]);
      const double inc = v - prev_var_[i];
      if (inc > d.max_variance_increase) d.max_variance_increase = inc;
      if (inc > 1e-12) d.variance_monotone = false;
      prev_var_[i] = v;
    }
  }

  void finish() {
    if (!config_.diagnostics || uses_features() || gram_->size() == 0) return;
    auto& d = result_.diagnostics;
    d.checked = true;
    const auto l = gram_->chol();
    const double lam = gram_->lambda();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) sum += std::sqrt(std::max(0.0, l(i, i) * l(i, i) - lam));
    const double n = static_cast<double>(gram_->size());
    d.variance_sum = sum;
    d.variance_sum_bound = std::sqrt(4.0 * (n + 2.0) * 0.5 * gram_->log_det_ratio());
    d.variance_sum_ok = sum <= d.variance_sum_bound;
  }

  std::optional<std::size_t> index_of(const Point& x, const std::optional<std::size_t>& hint) const {
    if (hint) return hint;
    if (!space_.is_finite()) return std::nullopt;
    const long i = space_.index_of(x);
    if (i < 0) return std::nullopt;
    return static_cast<std::size_t>(i);
  }

  double regret_of(const Point& x) const { return objective_.value(x) - result_.f_star; }

  void finalise_record(TrialRecord& rec, Clock::time_point start) {
    rec.beta_after = beta_from(model_settings(), log_det());
    rec.info_gain = 0.5 * log_det();
    for (double r : rec.instant_regret) {
      cumulative_ += r;
      simple_ = std::min(simple_, r);
    }
    rec.cumulative_regret = cumulative_;
    rec.simple_regret = simple_;
    if (config_.record_timing)
      rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    check_variance();
  }

  const RunConfig& config_;
  const Objective& objective_;
  const SearchSpace& space_;
  Kernel kernel_;
  const FiniteGroundTruth* truth_;
  ConfidenceSettings cls_;
  ConfidenceSettings gp_;
  Rng obs_rng_;
  Rng policy_rng_;
  Rng init_rng_;
  std::shared_ptr<RegularisedGram> gram_;
  std::shared_ptr<const RandomFeatureMap> feature_map_;
  double feature_log_det_ = 0.0;
  PointList xs_;
  ObservationSet obs_;
  PointList diag_grid_;
  std::vector<double> prev_var_;
  std::vector<std::size_t> perm_;
  std::size_t perm_pos_ = 0;
  double cumulative_ = 0.0;
  double simple_ = std::numeric_limits<double>::infinity();
  std::vector<double> sigma_star_trace_;
  RunResult result_;
};

}  // namespace

RunResult run_sequential(const RunConfig& config, const Objective& objective) {
  if (config.batch_size != 1) throw ConfigError("batch_size", "sequential runs need batch_size = 1");
  RunState s(config, objective);
  s.add_initial_points();
  const Algorithm alg = config.algorithm;
  for (int t = 1; t <= config.budget; ++t) {
    const auto start = Clock::now();
    TrialRecord rec;
    rec.t = t;
    Selection sel;
    double beta = 0.0;
    double sigma_q = 0.0;
    std::optional<double> sigma_star;
    if (is_gp(alg)) {
      const GPRegressor gp = s.regressor();
      beta = gp.beta();
      if (alg == Algorithm::GpUcb) {
        sel = gp_ucb_select(gp, s.space_, beta, config.box_search);
      } else {
        const double tau = s.obs_.empty() ? 0.0 : s.obs_.sorted().front();
        rec.tau = tau;
        sel = gp_ei_select(gp, s.space_, tau, config.box_search);
      }
      sigma_q = gp.stddev(sel.point);
      sigma_star = s.sigma_star([&](const Point& x) { return gp.stddev(x); });
    } else {
      rec.tau = s.current_tau();
      rec.labels = s.current_labels(rec.tau);
      const auto post = s.classifier(rec.labels);
      beta = post->beta();
      if (alg == Algorithm::BorePLS) {
        sel = bore_select(*post, s.space_, config.box_search);
      } else if (alg == Algorithm::BorePP) {
        sel = bore_pp_select(*post, s.space_, config.box_search);
      } else {
        sel.point = s.next_random();
      }
      sigma_q = post->stddev(sel.point);
      sigma_star = s.sigma_star([&](const Point& x) { return post->stddev(x); });
    }
    rec.beta = beta;
    rec.sigma_at_query.push_back(sigma_q);
    rec.sigma_star = sigma_star;
    rec.points.push_back(sel.point);
    if (auto idx = s.index_of(sel.point, sel.index)) rec.indices.push_back(*idx);
    rec.observations.push_back(s.append(sel.point, t));
    rec.instant_regret.push_back(s.regret_of(sel.point));
    s.finalise_record(rec, start);

    if (s.result_.l_eps && sigma_star) {
      const double le = *s.result_.l_eps;
      rec.thm2_instant = le * beta * (sigma_q + *sigma_star);
      rec.thm3_instant = 2.0 * le * beta * sigma_q;
      s.sigma_star_trace_.push_back(*sigma_star);
      s.result_.records.push_back(rec);
      auto& back = s.result_.records.back();
      back.thm2_bound = thm2_bound(s.result_.records, le, *rec.beta_after, s.sigma_star_trace_);
      back.thm3_bound = thm3_bound(s.result_.records, le, *rec.beta_after);
    } else {
      s.result_.records.push_back(std::move(rec));
    }
  }
  s.finish();
  return std::move(s.result_);
}

RunResult run_batch(const RunConfig& config, const Objective& objective) {
  const Algorithm alg = config.algorithm;
  if (is_gp(alg)) throw ConfigError("algorithm", "batch runs support bore_pls, bore_pp and random");
  RunState s(config, objective);
  s.add_initial_points();
  const int m = config.batch_size;
  const BatchScore score = alg == Algorithm::BorePLS ? BatchScore::Mean : BatchScore::Ucb;
  for (int t = 1; t <= config.budget; ++t) {
    const auto start = Clock::now();
    TrialRecord rec;
    rec.t = t;
    rec.tau = s.current_tau();
    rec.labels = s.current_labels(rec.tau);
    const auto post = s.classifier(rec.labels);
    const double beta = post->beta();
    rec.beta = beta;

    Batch batch;
    std::vector<double> weights;
    if (alg == Algorithm::Random) {
      for (int i = 0; i < m; ++i) batch.points.push_back(s.next_random());
      if (s.space_.is_finite()) weights.assign(s.space_.size(), 1.0 / static_cast<double>(s.space_.size()));
    } else if (config.consistency_mode) {
      const Selection sel = alg == Algorithm::BorePLS ? bore_select(*post, s.space_, config.box_search)
                                                      : bore_pp_select(*post, s.space_, config.box_search);
      for (int i = 0; i < m; ++i) batch.points.push_back(sel.point);
    } else {
      batch = propose_batch(*post, s.space_, m, config.svgd, s.policy_rng_, score);
      if (s.space_.is_finite()) weights = batch_weights(*post, s.space_, score);
    }
    for (std::size_t i = 0; i < batch.points.size(); ++i) {
      const std::optional<std::size_t> hint =
          i < batch.indices.size() ? std::optional<std::size_t>(batch.indices[i]) : std::nullopt;
      if (auto idx = s.index_of(batch.points[i], hint)) rec.indices.push_back(*idx);
    }
    if (s.space_.is_finite() && weights.empty()) weights = index_histogram(rec.indices, s.space_.size());

    rec.points = batch.points;
    rec.duplicates = count_duplicates(rec.points);
    for (const auto& x : rec.points) rec.sigma_at_query.push_back(post->stddev(x));
    rec.sigma_star = s.sigma_star([&](const Point& x) { return post->stddev(x); });

    if (s.truth_ != nullptr && !weights.empty()) {
      const auto dr = distributional_regret(weights, *s.truth_);
      rec.dist_regret = dr.regret;
      rec.kl_estimate = dr.kl;
      if (s.result_.l_eps && s.result_.l_pi) {
        double expected_sigma = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) expected_sigma += weights[i] * post->stddev(s.space_.points()[i]);
        rec.thm4_instant = 2.0 * *s.result_.l_eps * *s.result_.l_pi * beta * expected_sigma;
      }
    }

    for (const auto& x : rec.points) {
      rec.observations.push_back(s.append(x, t));
      rec.instant_regret.push_back(s.regret_of(x));
    }
    s.finalise_record(rec, start);
    s.result_.records.push_back(std::move(rec));
  }
  s.finish();
  return std::move(s.result_);
}

RunResult run_sequential(const RunConfig& config) {
  config.validate();
  const auto objective = make_objective(config);
  return run_sequential(config, *objective);
}

RunResult run_batch(const RunConfig& config) {
  config.validate();
  const auto objective = make_objective(config);
  return run_batch(config, *objective);
}

RunResult run(const RunConfig& config) {
  if (config.batch_size > 1 || config.consistency_mode) return run_batch(config);
  return run_sequential(config);
}

}  // namespace bore
