#include "bore/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "bore/acquisition.hpp"
#include "bore/benchmarks.hpp"
#include "bore/driver.hpp"
#include "bore/kernels.hpp"
#include "bore/labeling.hpp"
#include "bore/pls_classifier.hpp"
#include "bore/random.hpp"

namespace bore {

namespace {

struct Dataset {
  Kernel kernel;
  PointList x;
  Labels z;
};

Point random_point(Rng& rng, int d) {
  Point p(d);
  for (int k = 0; k < d; ++k) p(k) = uniform01(rng);
  return p;
}

Dataset random_dataset(Rng& rng, int n, int d, double lengthscale) {
  Dataset ds{Kernel::isotropic(KernelFamily::SquaredExponential, lengthscale, d), {}, {}};
  for (int i = 0; i < n; ++i) {
    ds.x.push_back(random_point(rng, d));
    ds.z.push_back(uniform01(rng) < 0.5 ? 1 : 0);
  }
  return ds;
}

CheckResult timed(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  r.name = name;
  try {
    auto [ok, detail] = body();
    r.passed = ok;
    r.detail = std::move(detail);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

}  // namespace

std::vector<CheckResult> run_validation(bool fast) {
  std::vector<CheckResult> out;
  const int max_n = fast ? 10 : 40;

  out.push_back(timed("classifier matches dense solve", [&] {
    Rng rng = make_rng(11, Stream::Objective);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int d = 1 + trial % 3;
      const int n = 1 + trial % max_n;
      const auto ds = random_dataset(rng, n, d, 0.3);
      const ConfidenceSettings s{0.025, 1.0, 0.1, 1.0, std::nullopt};
      const auto post = ClassifierPosterior::fit(ds.kernel, ds.x, ds.z, s);
      Eigen::MatrixXd a = build_gram(ds.kernel, ds.x).entries;
      a.diagonal().array() += s.lambda;
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z(i) = ds.z[i];
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      for (int q = 0; q < 10; ++q) {
        const Point x = random_point(rng, d);
        const Eigen::VectorXd k = kernel_vector(ds.kernel, ds.x, x);
        const double mean = k.dot(lu.solve(z));
        const double sd = std::sqrt(std::max(0.0, 1.0 - k.dot(lu.solve(k))));
        worst = std::max({worst, std::abs(mean - post.mean(x)), std::abs(sd - post.stddev(x))});
      }
    }
    return std::make_pair(worst <= 1e-10, "max abs error " + fmt(worst));
  }));

  out.push_back(timed("information gain identity", [&] {
    Rng rng = make_rng(12, Stream::Objective);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const auto ds = random_dataset(rng, fast ? 15 : 40, 1 + trial % 3, 0.2);
      const auto post = ClassifierPosterior::fit(ds.kernel, ds.x, ds.z, {0.025, 1.0, 0.1, 1.0, std::nullopt});
      worst = std::max(worst, std::abs(post.info_gain() - info_gain_sequential(ds.kernel, ds.x, 0.025)));
    }
    return std::make_pair(worst <= 1e-8, "max abs difference " + fmt(worst));
  }));

  out.push_back(timed("kernel gradients match finite differences", [&] {
    Rng rng = make_rng(13, Stream::Objective);
    double worst = 0.0;
    for (auto fam : {KernelFamily::SquaredExponential, KernelFamily::Matern52, KernelFamily::RationalQuadratic}) {
      const Kernel k(fam, Eigen::Vector2d(0.4, 0.7), 1.3, 1.5);
      for (int i = 0; i < 30; ++i) {
        const Point x = random_point(rng, 2);
        const Point y = random_point(rng, 2);
        const Eigen::VectorXd g = k.eval_grad(x, y);
        for (int j = 0; j < 2; ++j) {
          Point xp = x, xm = x;
          xp(j) += 1e-5;
          xm(j) -= 1e-5;
          const double fd = (k.eval(xp, y) - k.eval(xm, y)) / 2e-5;
          worst = std::max(worst, std::abs(fd - g(j)) / std::max(1e-3, std::abs(fd)));
        }
      }
    }
    return std::make_pair(worst <= 1e-5, "max relative error " + fmt(worst));
  }));

  out.push_back(timed("posterior gradients match finite differences", [&] {
    Rng rng = make_rng(14, Stream::Objective);
    const auto ds = random_dataset(rng, fast ? 8 : 25, 2, 0.4);
    const auto post = ClassifierPosterior::fit(ds.kernel, ds.x, ds.z, {0.025, 1.0, 0.1, 1.0, std::nullopt});
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Point x = random_point(rng, 2);
      const Eigen::VectorXd gm = post.mean_grad(x);
      const Eigen::VectorXd gs = post.stddev_grad(x);
      for (int j = 0; j < 2; ++j) {
        Point xp = x, xm = x;
        xp(j) += 1e-5;
        xm(j) -= 1e-5;
        const double fm = (post.mean(xp) - post.mean(xm)) / 2e-5;
        const double fs = (post.stddev(xp) - post.stddev(xm)) / 2e-5;
        worst = std::max(worst, std::abs(fm - gm(j)) / std::max(1e-3, std::abs(fm)));
        worst = std::max(worst, std::abs(fs - gs(j)) / std::max(1e-3, std::abs(fs)));
      }
    }
    return std::make_pair(worst <= 1e-5, "max relative error " + fmt(worst));
  }));

  out.push_back(timed("RKHS norm of a kernel expansion", [&] {
    Rng rng = make_rng(15, Stream::Objective);
    const Kernel k = Kernel::isotropic(KernelFamily::SquaredExponential, 0.3, 1);
    PointList pts;
    for (int i = 0; i < 5; ++i) pts.push_back(random_point(rng, 1));
    Eigen::VectorXd alpha(5);
    for (int i = 0; i < 5; ++i) alpha(i) = uniform01(rng) - 0.5;
    const Eigen::MatrixXd kk = build_gram(k, pts).entries;
    const double expected = std::sqrt(alpha.dot(kk * alpha));
    const double err = std::abs(rkhs_norm_finite(k, pts, kk * alpha) - expected);
    return std::make_pair(err <= 1e-8, "abs error " + fmt(err));
  }));

  out.push_back(timed("argmax pi* equals argmin f", [&] {
    const Kernel k = Kernel::isotropic(KernelFamily::SquaredExponential, 0.1, 1);
    int bad = 0;
    const int seeds = fast ? 20 : 100;
    for (int s = 0; s < seeds; ++s) {
      const auto obj = generate_synthetic(static_cast<std::uint64_t>(s), 5, k, 0.0, NoiseModel::gaussian(0.1), 100);
      const auto* truth = obj.ground_truth();
      const auto amax = static_cast<std::size_t>(std::max_element(truth->pi_star.begin(), truth->pi_star.end()) -
                                                 truth->pi_star.begin());
      if (amax != truth->argmin) ++bad;
    }
    return std::make_pair(bad == 0, std::to_string(bad) + " mismatches over " + std::to_string(seeds) + " seeds");
  }));

  out.push_back(timed("quantile labels cover gamma", [&] {
    Rng rng = make_rng(16, Stream::Objective);
    int bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> ys;
      const int n = 1 + trial % 15;
      for (int i = 0; i < n; ++i) ys.push_back(uniform01(rng));
      const ObservationSet obs(ys);
      const double gamma = 0.05 + 0.9 * uniform01(rng);
      const auto z = labels(obs, quantile(obs, gamma));
      const double frac = static_cast<double>(std::count(z.begin(), z.end(), 1)) / n;
      if (frac < gamma || frac > gamma + 1.0 / n + 1e-12) ++bad;
    }
    return std::make_pair(bad == 0, std::to_string(bad) + " violations");
  }));

  out.push_back(timed("finite selectors match exhaustive scan", [&] {
    Rng rng = make_rng(17, Stream::Objective);
    int bad = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto ds = random_dataset(rng, 1 + trial % max_n, 1, 0.1);
      PointList cand;
      for (int i = 0; i < 30; ++i) cand.push_back(random_point(rng, 1));
      const auto space = SearchSpace::finite(cand);
      const auto post = ClassifierPosterior::fit(ds.kernel, ds.x, ds.z, {0.025, 1.0, 0.1, 1.0, std::nullopt});
      std::size_t best_m = 0, best_u = 0;
      for (std::size_t i = 1; i < cand.size(); ++i) {
        if (post.mean(cand[i]) > post.mean(cand[best_m])) best_m = i;
        if (post.ucb_unclamped(cand[i]) > post.ucb_unclamped(cand[best_u])) best_u = i;
      }
      if (bore_select(post, space).index != best_m) ++bad;
      if (bore_pp_select(post, space).index != best_u) ++bad;
    }
    return std::make_pair(bad == 0, std::to_string(bad) + " disagreements");
  }));

  out.push_back(timed("noise CDF round trip", [&] {
    double worst = 0.0;
    for (const auto& noise : {NoiseModel::gaussian(0.1), NoiseModel::student_t(3.0, 0.2), NoiseModel::cauchy(0.5)}) {
      for (double p = 0.001; p <= 0.999; p += 0.001) worst = std::max(worst, std::abs(noise.cdf(noise.inverse_cdf(p)) - p));
    }
    return std::make_pair(worst <= 1e-10, "max abs error " + fmt(worst));
  }));

  out.push_back(timed("variance monotone and variance-sum bound on a run", [&] {
    RunConfig c;
    c.algorithm = Algorithm::BorePP;
    c.fixed_tau = 0.0;
    c.budget = fast ? 15 : 60;
    c.seed = 3;
    const auto r = run(c);
    const auto& d = r.diagnostics;
    const bool ok = d.checked && d.variance_monotone && d.variance_sum_ok;
    return std::make_pair(ok, "max increase " + fmt(d.max_variance_increase) + ", sum " + fmt(d.variance_sum) +
                                  " <= " + fmt(d.variance_sum_bound));
  }));

  return out;
}

}  // namespace bore
