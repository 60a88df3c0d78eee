#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "bore/batch_svgd.hpp"
#include "bore/errors.hpp"
#include "oracles.hpp"

using namespace bore;

namespace {

Point p1(double v) { return Point::Constant(1, v); }

LogDensityTarget gaussian_target() {
  return {[](const Point& x) { return -0.5 * x.squaredNorm(); }, [](const Point& x) -> Eigen::VectorXd { return -x; }};
}

// Equal mixture of unit Gaussians at -2 and +2.
LogDensityTarget two_mode_target() {
  LogDensityTarget t;
  t.log_p = [](const Point& x) {
    return std::log(std::exp(-0.5 * std::pow(x(0) - 2.0, 2)) + std::exp(-0.5 * std::pow(x(0) + 2.0, 2)));
  };
  t.grad_log_p = [](const Point& x) -> Eigen::VectorXd {
    const double a = std::exp(-0.5 * std::pow(x(0) - 2.0, 2));
    const double b = std::exp(-0.5 * std::pow(x(0) + 2.0, 2));
    return Eigen::VectorXd::Constant(1, (-(x(0) - 2.0) * a - (x(0) + 2.0) * b) / (a + b));
  };
  return t;
}

LogDensityTarget constant_target() {
  return {[](const Point&) { return 0.0; }, [](const Point& x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); }};
}

PointList uniform_particles(Rng& rng, int m, int d, double lo, double hi) {
  PointList p;
  for (int i = 0; i < m; ++i) p.push_back(oracle::random_point(rng, d, lo, hi));
  return p;
}

double mean_pairwise(const PointList& p) {
  double s = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j, ++n) s += (p[i] - p[j]).norm();
  return s / n;
}

double min_pairwise(const PointList& p) {
  double s = 1e300;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) s = std::min(s, (p[i] - p[j]).norm());
  return s;
}

ClassifierPosterior smooth_posterior(std::optional<double> beta) {
  return ClassifierPosterior::fit(Kernel::isotropic(KernelFamily::SquaredExponential, 0.3, 1),
                                  {p1(0.05), p1(0.55), p1(0.65), p1(0.95)}, {0, 1, 1, 0},
                                  {0.025, 1.0, 0.1, 1.0, beta});
}

}  // namespace

TEST_CASE("settings validation and step rule names") {
  CHECK(to_string(StepRule::Adaptive) == "adaptive");
  CHECK(step_rule_from_string("plain") == StepRule::Plain);
  CHECK_THROWS_AS((void)step_rule_from_string("adam"), InvalidInput);
  SvgdSettings s;
  CHECK(s.step_size == 1e-3);
  CHECK(s.decay == 0.9);
  CHECK(s.steps == 1000);
  s.step_size = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  CHECK_THROWS_AS(ParticleSet({}, p1(0), p1(1), SvgdSettings{}), InvalidInput);
  const ParticleSet ps({p1(3.0)}, p1(0), p1(1), SvgdSettings{});
  CHECK(ps.particles[0](0) == 1.0);
}

TEST_CASE("median trick bandwidth") {
  const PointList p{p1(0.0), p1(1.0), p1(3.0)};
  // squared distances 1, 4, 9
  const Kernel k = median_trick_kernel(p);
  CHECK(k.lengthscales()(0) == doctest::Approx(std::sqrt(4.0 / (2.0 * std::log(4.0)))));
  CHECK(median_trick_kernel({p1(0.2)}).lengthscales()(0) == 1.0);
  CHECK(median_trick_kernel({p1(0.2), p1(0.2)}).lengthscales()(0) == 1.0);
}

TEST_CASE("single particle is projected gradient ascent") {
  const auto target = two_mode_target();
  for (const auto rule : {StepRule::Plain, StepRule::Adaptive}) {
    SvgdSettings s;
    s.rule = rule;
    s.step_size = 0.05;
    s.steps = 200;
    ParticleSet ps({p1(0.3)}, p1(-1.0), p1(5.0), s);
    Point x = p1(0.3);
    Eigen::VectorXd h;
    for (int k = 0; k < s.steps; ++k) {
      ps = svgd_step(ps, target);
      const Eigen::VectorXd g = target.grad_log_p(x);
      Eigen::VectorXd delta;
      if (rule == StepRule::Plain) {
        delta = s.step_size * std::pow(s.decay, k) * g;
      } else {
        const Eigen::VectorXd g2 = g.array().square();
        h = k == 0 ? g2 : Eigen::VectorXd(s.decay * h + (1.0 - s.decay) * g2);
        delta = s.step_size * (g.array() / (1e-6 + h.array().sqrt())).matrix();
      }
      x = (x + delta).cwiseMax(p1(-1.0)).cwiseMin(p1(5.0));
      REQUIRE(ps.particles[0] == x);
    }
  }
}

TEST_CASE("standard Gaussian target at default settings") {
  Rng rng(0);
  ParticleSet ps(uniform_particles(rng, 50, 1, -2.5, 2.5), p1(-10), p1(10), SvgdSettings{});
  ps = run_svgd(ps, gaussian_target());
  double mean = 0.0;
  for (const auto& p : ps.particles) mean += p(0) / 50.0;
  double var = 0.0;
  for (const auto& p : ps.particles) var += (p(0) - mean) * (p(0) - mean) / 50.0;
  MESSAGE("mean " << mean << " variance " << var);
  CHECK(std::abs(mean) <= 0.1);
  CHECK(std::abs(var - 1.0) <= 0.15);
}

TEST_CASE("two-mode target keeps both modes populated") {
  Rng rng(0);
  ParticleSet ps(uniform_particles(rng, 50, 1, -4.0, 4.0), p1(-10), p1(10), SvgdSettings{});
  ps = run_svgd(ps, two_mode_target());
  int left = 0;
  for (const auto& p : ps.particles) left += p(0) < 0.0;
  MESSAGE("left " << left << " of 50");
  CHECK(left >= 13);
  CHECK(50 - left >= 13);
}

TEST_CASE("constant target spreads particles apart") {
  Rng rng(1);
  ParticleSet ps(uniform_particles(rng, 12, 2, 0.4, 0.6), Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2),
                 SvgdSettings{});
  const double min0 = min_pairwise(ps.particles);
  double prev = mean_pairwise(ps.particles);
  for (int k = 0; k < 100; ++k) {
    ps = svgd_step(ps, constant_target());
    const double cur = mean_pairwise(ps.particles);
    REQUIRE(cur >= prev - 1e-12);
    prev = cur;
  }
  CHECK(min_pairwise(ps.particles) >= min0);
}

TEST_CASE("non-finite score names the particle") {
  LogDensityTarget bad{[](const Point&) { return 0.0; },
                       [](const Point& x) -> Eigen::VectorXd {
                         return Eigen::VectorXd::Constant(1, x(0) > 0.5 ? std::nan("") : 0.0);
                       }};
  const ParticleSet ps({p1(0.1), p1(0.9)}, p1(0), p1(1), SvgdSettings{});
  try {
    (void)svgd_step(ps, bad);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("particle 1") != std::string::npos);
  }
}

TEST_CASE("ucb log target gradient matches finite differences") {
  const auto post = smooth_posterior(std::nullopt);
  const auto t = ucb_log_target(post, 1e-6);
  const auto m = mean_log_target(post, 1e-6);
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const Point x = oracle::random_point(rng, 1);
    REQUIRE(oracle::relative_error(t.grad_log_p(x), oracle::central_difference(t.log_p, x)) <= 1e-4);
    if (post.mean(x) > 1e-3)
      REQUIRE(oracle::relative_error(m.grad_log_p(x), oracle::central_difference(m.log_p, x)) <= 1e-4);
  }
  const auto z = ClassifierPosterior::fit(Kernel::isotropic(KernelFamily::SquaredExponential, 0.3, 1), {p1(0.5)}, {0},
                                          {0.025, 1.0, 0.1, 1.0, 0.0});
  CHECK(mean_log_target(z, 1e-6).log_p(p1(0.5)) == doctest::Approx(std::log(1e-6)));
  CHECK(mean_log_target(z, 1e-6).grad_log_p(p1(0.5)).norm() == 0.0);
}

TEST_CASE("single box particle reaches the bore++ optimum") {
  const auto post = smooth_posterior(0.2);
  const auto box = SearchSpace::box(p1(0.0), p1(1.0));
  const double best = bore_pp_select(post, box).score;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const auto batch = propose_batch(post, box, 1, SvgdSettings{}, rng);
    REQUIRE(batch.points.size() == 1);
    CHECK(std::abs(post.ucb(batch.points[0]) - best) <= 1e-3);
  }
}

TEST_CASE("finite batches sample the normalised ucb weights") {
  Rng rng(3);
  PointList pts;
  for (int i = 0; i < 20; ++i) pts.push_back(p1(i / 19.0));
  const auto space = SearchSpace::finite(pts);
  const auto post = ClassifierPosterior::fit(Kernel::isotropic(KernelFamily::SquaredExponential, 0.1, 1),
                                             {p1(0.2), p1(0.5), p1(0.8)}, {1, 0, 0},
                                             {0.025, 1.0, 0.1, 1.0, 0.3});
  const auto w = ucb_weights(post, space);
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));
  const auto batch = propose_batch(post, space, 10000, SvgdSettings{}, rng);
  std::vector<double> freq(20, 0.0);
  for (std::size_t i : batch.indices) freq[i] += 1e-4;
  double tv = 0.0;
  for (int i = 0; i < 20; ++i) tv += 0.5 * std::abs(freq[i] - w[i]);
  MESSAGE("total variation " << tv);
  CHECK(tv <= 0.02);
  for (std::size_t b = 0; b < batch.points.size(); ++b) REQUIRE(batch.points[b] == pts[batch.indices[b]]);
}

TEST_CASE("batch weights fall back to uniform") {
  const auto z = ClassifierPosterior::fit(Kernel::isotropic(KernelFamily::SquaredExponential, 0.1, 1), {p1(0.5)}, {0},
                                          {0.025, 1.0, 0.1, 1.0, 0.0});
  const auto w = batch_weights(z, SearchSpace::finite({p1(0.4), p1(0.5)}), BatchScore::Mean);
  CHECK(w == std::vector<double>{0.5, 0.5});
}

TEST_CASE("batches are deterministic given the seed") {
  const auto post = smooth_posterior(std::nullopt);
  const auto box = SearchSpace::box(p1(0.0), p1(1.0));
  SvgdSettings s;
  s.steps = 200;
  Rng a(9), b(9);
  const auto x = propose_batch(post, box, 10, s, a);
  const auto y = propose_batch(post, box, 10, s, b);
  for (int i = 0; i < 10; ++i) REQUIRE(x.points[i] == y.points[i]);
  Rng c(9);
  CHECK_THROWS_AS((void)propose_batch(post, box, 0, s, c), InvalidInput);
}

TEST_CASE("duplicate counting") {
  CHECK(count_duplicates({p1(0.1), p1(0.2), p1(0.1), p1(0.1)}) == 2);
  CHECK(count_duplicates({p1(0.1)}) == 0);
}
