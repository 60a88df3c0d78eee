#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bore/benchmarks.hpp"
#include "bore/errors.hpp"
#include "oracles.hpp"

using namespace bore;

namespace {

Point p1(double v) { return Point::Constant(1, v); }

const Kernel kTheoryKernel = Kernel::isotropic(KernelFamily::SquaredExponential, 0.1, 1);

}  // namespace

TEST_CASE("noise CDF round trip") {
  for (const auto& noise : {NoiseModel::gaussian(0.1), NoiseModel::gaussian(2.0), NoiseModel::student_t(3.0, 0.2),
                            NoiseModel::student_t(1.5, 1.0), NoiseModel::cauchy(0.5)}) {
    for (int i = 1; i <= 999; ++i) {
      const double p = i / 1000.0;
      REQUIRE(std::abs(noise.cdf(noise.inverse_cdf(p)) - p) <= 1e-10);
    }
    double prev = -1.0;
    for (double u = -5.0; u <= 5.0; u += 0.01) {
      const double c = noise.cdf(u * noise.scale());
      REQUIRE(c > prev);
      prev = c;
    }
  }
}

TEST_CASE("noise closed forms") {
  const auto g = NoiseModel::gaussian(1.0);
  CHECK(g.cdf(0.0) == 0.5);
  CHECK(g.pdf(0.0) == doctest::Approx(oracle::normal_pdf(0.0)));
  CHECK(g.cdf(1.3) == doctest::Approx(oracle::normal_cdf(1.3)).epsilon(1e-14));
  const auto c = NoiseModel::cauchy(2.0);
  CHECK(c.cdf(2.0) == doctest::Approx(0.75));
  CHECK(c.inverse_cdf(0.75) == doctest::Approx(2.0));
  CHECK(NoiseModel::student_t(3.0, 0.5).variance().value() == doctest::Approx(0.75));
  CHECK_FALSE(NoiseModel::student_t(2.0, 1.0).variance().has_value());
  CHECK_FALSE(c.variance().has_value());
  CHECK(std::isinf(g.inverse_cdf(1.0)));
  CHECK_THROWS_AS((void)g.inverse_cdf(1.5), InvalidInput);
  CHECK_THROWS_AS((void)NoiseModel::gaussian(0.0), InvalidInput);
  CHECK(noise_family_from_string(to_string(NoiseFamily::StudentT)) == NoiseFamily::StudentT);
}

TEST_CASE("gaussian noise sample variance") {
  const auto noise = NoiseModel::gaussian(0.1);
  const auto obj = generate_synthetic(1, 5, kTheoryKernel, 0.0, noise, 100);
  Rng rng = make_rng(1, Stream::Observation);
  const std::size_t i = 17;
  const double f = obj.ground_truth()->f[i];
  double s = 0.0, s2 = 0.0;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const double e = obj.observe_index(i, rng) - f;
    s += e;
    s2 += e * e;
  }
  const double var = (s2 - s * s / n) / (n - 1);
  CHECK(std::abs(var - 0.01) <= 0.2 * 0.01);
}

TEST_CASE("student-t sampling matches its variance") {
  const auto noise = NoiseModel::student_t(5.0, 0.3);
  Rng rng(4);
  double s2 = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) s2 += std::pow(noise.sample(rng), 2);
  CHECK(std::abs(s2 / n - *noise.variance()) <= 0.05 * *noise.variance());
}

TEST_CASE("lipschitz constant of the inverse CDF") {
  const auto g = NoiseModel::gaussian(1.0);
  CHECK(lipschitz_of_inverse_cdf(g, 0.5, 0.5) == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-14));
  CHECK(lipschitz_of_inverse_cdf(g, 0.3, 0.3) == doctest::Approx(lipschitz_of_inverse_cdf(g, 0.7, 0.7)).epsilon(1e-12));
  const double z = oracle::normal_cdf(-1.2);
  CHECK(lipschitz_of_inverse_cdf(g, z, 0.6) == doctest::Approx(1.0 / oracle::normal_pdf(1.2)).epsilon(1e-10));
  double prev = 0.0;
  for (double w = 0.0; w < 0.49; w += 0.01) {
    const double l = lipschitz_of_inverse_cdf(g, 0.5 - w, 0.5 + w);
    REQUIRE(l >= prev);
    prev = l;
  }
  CHECK(lipschitz_of_inverse_cdf(NoiseModel::gaussian(0.1), 0.5, 0.5) == doctest::Approx(0.1 * std::sqrt(2.0 * M_PI)));
  CHECK_THROWS_AS((void)lipschitz_of_inverse_cdf(g, 0.0, 0.5), InvalidInput);
  CHECK_THROWS_AS((void)lipschitz_of_inverse_cdf(g, 0.5, 1.0), InvalidInput);
  CHECK_THROWS_AS((void)lipschitz_of_inverse_cdf(g, 0.6, 0.5), InvalidInput);
}

TEST_CASE("single center objective") {
  const Point c = p1(0.42);
  const SyntheticObjective obj({c}, Eigen::VectorXd::Constant(1, 1.0), kTheoryKernel, 0.0, NoiseModel::gaussian(0.1),
                               {p1(0.1), c, p1(0.9)});
  CHECK(obj.pi_star(c) == 1.0);
  CHECK(obj.ground_truth()->argmin == 1);
  CHECK(std::isinf(obj.min_value()));
  CHECK(obj.ground_truth()->pi_norm == doctest::Approx(1.0));
}

TEST_CASE("generated objectives satisfy the invariants") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto noise = NoiseModel::gaussian(0.1);
    const auto obj = generate_synthetic(seed, 5, kTheoryKernel, 0.0, noise, 100);
    const auto& t = *obj.ground_truth();
    REQUIRE(rkhs_norm_finite(kTheoryKernel, obj.centers(), build_gram(kTheoryKernel, obj.centers()).entries *
                                                               obj.weights()) == doctest::Approx(1.0).epsilon(1e-10));
    REQUIRE((obj.weights().array() >= 0.0).all());
    double total = 0.0;
    for (std::size_t i = 0; i < t.pi_star.size(); ++i) {
      REQUIRE(t.pi_star[i] >= 0.0);
      REQUIRE(t.pi_star[i] <= 1.0);
      REQUIRE(std::abs(noise.cdf(t.tau - t.f[i]) - t.pi_star[i]) <= 1e-10);
      total += t.pi_star[i];
    }
    REQUIRE(t.gamma == doctest::Approx(total / 100.0).epsilon(1e-14));
    REQUIRE(oracle::scan_argmax(t.pi_star) == t.argmin);
    double lp = 0.0;
    for (double p : t.pi_star) lp = std::max(lp, 1.0 / p);
    REQUIRE(obj.l_pi() == lp);
  }
}

TEST_CASE("synthetic generation is reproducible") {
  const auto a = generate_synthetic(5, 5, kTheoryKernel, 0.0, NoiseModel::gaussian(0.1), 50);
  const auto b = generate_synthetic(5, 5, kTheoryKernel, 0.0, NoiseModel::gaussian(0.1), 50);
  CHECK(a.weights() == b.weights());
  CHECK(a.ground_truth()->f == b.ground_truth()->f);
  const auto c = generate_synthetic(6, 5, kTheoryKernel, 0.0, NoiseModel::gaussian(0.1), 50);
  CHECK(a.ground_truth()->f != c.ground_truth()->f);
  CHECK_THROWS_AS((void)generate_synthetic(5, 0, kTheoryKernel, 0.0, NoiseModel::gaussian(0.1), 50), InvalidInput);
  CHECK_THROWS_AS((void)generate_synthetic(5, 5, kTheoryKernel, 0.0, NoiseModel::gaussian(0.1), 1), InvalidInput);
}

TEST_CASE("label probabilities match pi* and gamma") {
  for (const auto& noise : {NoiseModel::gaussian(0.1), NoiseModel::student_t(3.0, 0.1), NoiseModel::cauchy(0.1)}) {
    const auto obj = generate_synthetic(2, 5, kTheoryKernel, 0.0, noise, 100);
    const auto& t = *obj.ground_truth();
    Rng rng(7);
    for (std::size_t i : {std::size_t{0}, t.argmin, std::size_t{50}}) {
      int hits = 0;
      const int n = 10000;
      for (int k = 0; k < n; ++k) hits += obj.observe_index(i, rng) <= t.tau;
      const double se = std::sqrt(t.pi_star[i] * (1.0 - t.pi_star[i]) / n);
      REQUIRE(std::abs(hits / static_cast<double>(n) - t.pi_star[i]) <= 3.0 * se + 1e-12);
    }
    int hits = 0;
    const int rounds = 200;
    for (int r = 0; r < rounds; ++r)
      for (std::size_t i = 0; i < 100; ++i) hits += obj.observe_index(i, rng) <= t.tau;
    double var = 0.0;
    for (double p : t.pi_star) var += p * (1.0 - p);
    const double se = std::sqrt(var) / (100.0 * std::sqrt(rounds));
    CHECK(std::abs(hits / (100.0 * rounds) - t.gamma) <= 3.0 * se);
  }
}

TEST_CASE("observation outside the domain is rejected") {
  const auto obj = generate_synthetic(3, 5, kTheoryKernel, 0.0, NoiseModel::gaussian(0.1), 20);
  Rng rng(1);
  CHECK_THROWS_AS((void)obj.observe(p1(2.0), rng), InvalidInput);
  CHECK_THROWS_AS((void)obj.observe_index(20, rng), InvalidInput);
  CHECK_NOTHROW((void)obj.observe(obj.space().points()[3], rng));
}

TEST_CASE("analytic functions at their known minima") {
  CHECK(AnalyticObjective::evaluate(AnalyticFunction::Rosenbrock, Eigen::Vector2d(1, 1)) == 0.0);
  CHECK(AnalyticObjective::evaluate(AnalyticFunction::Rosenbrock, Eigen::Vector2d(0, 0)) == 1.0);
  CHECK(AnalyticObjective::evaluate(AnalyticFunction::Sphere, Eigen::Vector3d(1, 2, 0)) == 5.0);
  CHECK(std::abs(AnalyticObjective::evaluate(AnalyticFunction::Hartmann3, Eigen::Vector3d(0.114614, 0.555649, 0.852547)) +
                 3.86278) <= 1e-5);
  CHECK(std::abs(AnalyticObjective::evaluate(AnalyticFunction::SixHumpCamel, Eigen::Vector2d(0.0898, -0.7126)) +
                 1.0316) <= 1e-4);
  struct Case {
    AnalyticFunction fn;
    int dim;
  };
  Rng rng(8);
  for (const auto c : {Case{AnalyticFunction::Rosenbrock, 2}, Case{AnalyticFunction::Rosenbrock, 5},
                       Case{AnalyticFunction::Hartmann3, 3}, Case{AnalyticFunction::SixHumpCamel, 2},
                       Case{AnalyticFunction::Sphere, 4}}) {
    const AnalyticObjective obj(c.fn, c.dim);
    CHECK(std::abs(obj.value(obj.min_location()) - obj.min_value()) <= 1e-8);
    CHECK(obj.space().contains(obj.min_location()));
    CHECK(obj.observe(obj.min_location(), rng) == obj.min_value());
    for (int i = 0; i < 2000; ++i) REQUIRE(obj.value(obj.space().sample_uniform(rng)) >= obj.min_value() - 1e-9);
    CHECK(analytic_function_from_string(to_string(c.fn)) == c.fn);
  }
  CHECK_THROWS_AS(AnalyticObjective(AnalyticFunction::Hartmann3, 2), InvalidInput);
  const AnalyticObjective noisy(AnalyticFunction::Sphere, 2, NoiseModel::gaussian(0.1));
  CHECK(noisy.observe(Eigen::Vector2d(0, 0), rng) != 0.0);
}
