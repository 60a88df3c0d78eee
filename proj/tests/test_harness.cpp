#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bore/config.hpp"
#include "bore/errors.hpp"
#include "bore/experiments.hpp"
#include "bore/results.hpp"
#include "bore/validate.hpp"

using namespace bore;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bore_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string config_error_field(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

RunConfig unusual_config() {
  RunConfig c;
  c.name = "unusual";
  c.algorithm = Algorithm::GpEi;
  c.gamma = 0.1;
  c.fixed_tau = -0.25;
  c.lambda = 0.3;
  c.delta = 0.05;
  c.norm_bound = 2.5;
  c.fixed_beta = 1.25;
  c.kernel = KernelConfig{KernelFamily::SquaredExponential, {0.2, 0.4}, 1.5, 2.0};
  c.backend = ClassifierBackend::RandomFeatures;
  c.num_features = 64;
  c.gp = GpConfig{0.02, 0.2, 0.5, 3.0, 4.0};
  c.budget = 7;
  c.initial_points = 3;
  c.seed = 123456789012345ULL;
  c.objective.kind = ObjectiveConfig::Kind::Analytic;
  c.objective.function = AnalyticFunction::Rosenbrock;
  c.objective.dim = 2;
  c.objective.noise_free = true;
  c.objective.noise = NoiseConfig{NoiseFamily::StudentT, 0.3, 4.0};
  c.objective.kernel = KernelConfig{KernelFamily::RationalQuadratic, {0.7}, 1.0, 3.0};
  c.objective.seed = 99;
  c.svgd = SvgdSettings{0.01, 0.8, 50, StepRule::Plain, 1e-5};
  c.box_search = BoxSearchSettings{64, 4, 20, 0.05};
  c.consistency_mode = true;
  c.diagnostics = false;
  c.record_timing = true;
  c.objective.tau = 0.1 + 0.2;  // not exactly representable in decimal
  return c;
}

}  // namespace

TEST_CASE("config round trip") {
  const auto dir = scratch("config");
  for (const auto& c : {RunConfig{}, unusual_config(), theory_config(Algorithm::GpUcb, 7, 100)}) {
    CHECK(config_from_json(config_to_json(c)) == c);
    save_config(c, dir / "c.json");
    CHECK(load_config(dir / "c.json") == c);
  }
}

TEST_CASE("config parsing diagnostics") {
  const auto dir = scratch("diag");
  CHECK(config_error_field([] { (void)config_from_json(nlohmann::json{{"bogus", 1}}); }) == "bogus");
  CHECK(config_error_field([] { (void)config_from_json(nlohmann::json{{"objective", {{"noise", {{"sigma", 1}}}}}}); }) ==
        "objective.noise.sigma");
  CHECK(config_error_field([] { (void)config_from_json(nlohmann::json{{"lambda", "small"}}); }) == "lambda");
  CHECK(config_error_field([] { (void)config_from_json(nlohmann::json{{"budget", 2.5}}); }) == "budget");
  CHECK(config_error_field([] { (void)config_from_json(nlohmann::json{{"algorithm", "tpe"}}); }) == "algorithm");
  CHECK(config_error_field([] { (void)config_from_json(nlohmann::json{{"seed", -1}}); }) == "seed");
  CHECK(config_error_field([] { (void)config_from_json(nlohmann::json::array()); }) == "<root>");
  const auto ls = config_from_json(nlohmann::json{{"kernel", {{"lengthscales", 0.3}}}});
  CHECK(ls.kernel.lengthscales == std::vector<double>{0.3});

  write(dir / "syntax.json", "{\n  \"lambda\": 0.1,\n  \"delta\": ,\n}\n");
  try {
    (void)load_config(dir / "syntax.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("syntax.json") != std::string::npos);
  }
  write(dir / "invalid.json", "{\"gamma\": 1.5}");
  try {
    (void)load_config(dir / "invalid.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "gamma");
    CHECK(std::string(e.what()).find("invalid.json") != std::string::npos);
  }
  try {
    (void)load_config(dir / "missing.toml");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("missing.toml") != std::string::npos);
  }
}

TEST_CASE("csv layout and exact re-read") {
  const auto dir = scratch("csv");
  auto c = theory_config(Algorithm::BorePP, 3, 15);
  c.record_timing = true;
  const auto r = run(c);
  ResultsTable table;
  table.append(r, run_id("theory", c.algorithm, c.seed));
  REQUIRE(table.rows.size() == 15);
  write_csv(table, dir / "nested" / "out.csv");
  const auto text = slurp(dir / "nested" / "out.csv");
  CHECK(text.substr(0, text.find('\n')) ==
        "run_id,algorithm,seed,t,batch_index,x,y,tau,r_t,R_t,simple_regret,beta_t,sigma_at_query,info_gain,"
        "thm2_bound,thm3_bound,dist_regret,kl_estimate,wall_ms");
  const auto back = read_csv(dir / "nested" / "out.csv");
  REQUIRE(back.rows.size() == table.rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    REQUIRE(back.rows[i] == table.rows[i]);
    REQUIRE(back.rows[i].R_t == r.records[i].cumulative_regret);
  }
  CHECK(text.find(",null,") != std::string::npos);  // dist_regret is absent for sequential runs
  CHECK(to_csv(back) == text);
}

TEST_CASE("batch csv rows") {
  auto c = theory_config(Algorithm::BorePP, 3, 4);
  c.batch_size = 3;
  const auto r = run(c);
  ResultsTable table;
  table.append(r, "b");
  REQUIRE(table.rows.size() == 12);
  CHECK(table.rows[5].t == 2);
  CHECK(table.rows[5].batch_index == 2);
  CHECK(table.rows[5].dist_regret.has_value());
  CHECK_FALSE(table.rows[5].thm3_bound.has_value());
  double sum = 0.0;
  for (const auto& row : table.rows) sum += row.r_t;
  CHECK(table.rows.back().R_t == doctest::Approx(sum));
}

TEST_CASE("multi-dimensional points use semicolons") {
  ResultsTable t;
  ResultRow row;
  row.run_id = "x";
  row.algorithm = "random";
  row.x = Eigen::Vector3d(0.1, 0.2, 1.0 / 3.0);
  t.rows.push_back(row);
  CHECK(to_csv(t).find(",0.10000000000000001;0.20000000000000001;0.33333333333333331,") != std::string::npos);
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_optional(std::nullopt) == "null");
}

TEST_CASE("read_csv rejects malformed files") {
  const auto dir = scratch("badcsv");
  write(dir / "a.csv", "a,b,c\n1,2,3\n");
  CHECK_THROWS_AS((void)read_csv(dir / "a.csv"), InvalidInput);
  CHECK_THROWS_AS((void)read_csv(dir / "none.csv"), InvalidInput);
}

TEST_CASE("bootstrap confidence intervals") {
  const std::vector<double> constant(10, 4.2);
  const auto ci = bootstrap_mean_ci(constant, 1000, 0.95, 1);
  CHECK(ci.mean == doctest::Approx(4.2).epsilon(1e-15));
  CHECK(ci.upper - ci.lower == doctest::Approx(0.0).epsilon(1e-15));
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back(i * i);
  const auto a = bootstrap_mean_ci(v, 1000, 0.95, 2);
  const auto b = bootstrap_mean_ci(v, 1000, 0.95, 2);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK(a.lower <= a.mean);
  CHECK(a.mean <= a.upper);
  CHECK(a.mean == 28.5);
  // Standard error of the mean is about 9.3, so a 95% interval spans roughly +-18.
  CHECK(a.upper - a.lower > 20.0);
  CHECK(a.upper - a.lower < 50.0);
  CHECK(bootstrap_mean_ci(v, 1000, 0.5, 2).upper - bootstrap_mean_ci(v, 1000, 0.5, 2).lower < a.upper - a.lower);
  CHECK_THROWS_AS((void)bootstrap_mean_ci(std::vector<double>{}, 10, 0.95, 0), InvalidInput);
}

TEST_CASE("summary of identical runs has zero-width intervals") {
  const auto r = run(theory_config(Algorithm::BorePLS, 1, 10));
  std::map<std::string, std::vector<RunResult>> runs;
  runs["bore_pls"] = {r, r, r};
  const auto s = summarize(runs, 0);
  CHECK(s["ci_level"] == 0.95);
  CHECK(s["ci_method"] == "percentile_bootstrap");
  const auto& a = s["algorithms"]["bore_pls"];
  CHECK(a["trials"] == 3);
  REQUIRE(a["iterations"].size() == 10);
  for (std::size_t t = 0; t < 10; ++t) {
    CHECK(a["cumulative_regret"]["lower"][t].get<double>() == a["cumulative_regret"]["upper"][t].get<double>());
    CHECK(a["cumulative_regret"]["mean"][t].get<double>() == doctest::Approx(r.records[t].cumulative_regret));
    CHECK(a["simple_regret"]["lower"][t].get<double>() == a["simple_regret"]["upper"][t].get<double>());
  }
}

TEST_CASE("theory experiment output is deterministic") {
  const auto d1 = scratch("theory1");
  const auto d2 = scratch("theory2");
  TheoryOptions o;
  o.trials = 3;
  o.budget = 20;
  o.seed = 7;
  o.output_dir = d1;
  const auto out = run_theory(o);
  o.output_dir = d2;
  o.jobs = 4;
  (void)run_theory(o);
  REQUIRE(out.files.size() == 4);
  for (const auto* name : {"theory_bore_pls_seed7.csv", "theory_bore_pp_seed7.csv", "theory_gp_ucb_seed7.csv",
                           "summary.json"}) {
    REQUIRE(fs::exists(d1 / name));
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  }
  CHECK(read_csv(d1 / "theory_bore_pp_seed7.csv").rows.size() == 60);
  const auto summary = nlohmann::json::parse(slurp(d1 / "summary.json"));
  CHECK(summary["experiment"] == "theory");
  CHECK(summary["algorithms"].size() == 3);
  CHECK(summary["algorithms"]["gp_ucb"]["seeds"][0] == trial_seed(7, 0));
  o.trials = 0;
  CHECK_THROWS_AS((void)run_theory(o), ConfigError);
}

TEST_CASE("theory defaults") {
  const auto c = theory_config(Algorithm::BorePP, 0, 100);
  CHECK(c.fixed_tau == 0.0);
  CHECK(c.lambda == 0.025);
  CHECK(c.delta == 0.1);
  CHECK(c.gp.lambda == 0.01);
  CHECK(c.gp.delta == 0.1);
  CHECK(c.objective.noise.scale * c.objective.noise.scale == doctest::Approx(0.01));
  CHECK(c.objective.num_centers == 5);
  CHECK(c.objective.domain_size == 100);
  CHECK(c.kernel.lengthscales == std::vector<double>{0.1});
  const RunConfig defaults;
  CHECK(defaults.gamma == 0.25);
  CHECK(trial_seed(0, 1) != trial_seed(0, 2));
}

TEST_CASE("suites") {
  const auto dir = scratch("suite");
  const std::string variants =
      R"([{"name": "a", "algorithm": "bore_pp", "budget": 5, "fixed_tau": 0.0},
          {"name": "a", "algorithm": "random", "budget": 5}])";
  write(dir / "suite.json", R"({"name": "demo", "seeds": [1, 2], "output_dir": ")" + (dir / "out").string() +
                                R"(", "variants": )" + variants + "}");
  const auto suite = load_suite(dir / "suite.json");
  CHECK(suite.name == "demo");
  CHECK(suite.variants.size() == 2);
  const auto out = run_suite(suite, 2);
  CHECK(out.files.size() == 5);
  for (const auto* name : {"a_bore_pp_seed1.csv", "a_bore_pp_seed2.csv", "a_random_seed1.csv", "a_random_seed2.csv"})
    CHECK(fs::exists(dir / "out" / name));
  CHECK(out.summary["experiment"] == "demo");

  write(dir / "dup.json", R"({"variants": [{"name": "a"}, {"name": "a"}]})");
  CHECK(config_error_field([&] { (void)load_suite(dir / "dup.json"); }) == "variants[1].name");
  write(dir / "badvar.json", R"({"variants": [{"name": "a", "lambda": -1}]})");
  CHECK(config_error_field([&] { (void)load_suite(dir / "badvar.json"); }) == "variants[0].lambda");
  write(dir / "unknown.json", R"({"variants": [{}], "trials": 3})");
  CHECK(config_error_field([&] { (void)load_suite(dir / "unknown.json"); }) == "trials");
}

TEST_CASE("output directory override") {
  ::setenv("BORE_OUTPUT_DIR", "/tmp/somewhere", 1);
  CHECK(default_output_dir() == fs::path("/tmp/somewhere"));
  ::unsetenv("BORE_OUTPUT_DIR");
  CHECK(default_output_dir() == fs::path("results"));
}

TEST_CASE("parallel_for runs every task and reports failures") {
  std::vector<int> hit(100, 0);
  parallel_for(100, 8, [&](int i) { hit[i] += 1; });
  CHECK(std::count(hit.begin(), hit.end(), 1) == 100);
  CHECK_THROWS_AS(parallel_for(10, 3, [](int i) {
                    if (i == 6) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("cross-entropy loss evaluator") {
  const Kernel k = Kernel::isotropic(KernelFamily::SquaredExponential, 0.1, 1);
  const ConfidenceSettings s{0.025, 1.0, 0.1, 1.0, std::nullopt};
  const ClassifierPosterior prior(k, s);
  const PointList x{Point::Constant(1, 0.2), Point::Constant(1, 0.8)};
  CHECK(cross_entropy_loss(prior, x, {1, 1}) == doctest::Approx(-std::log(1e-12)));
  CHECK(cross_entropy_loss(prior, x, {0, 0}) == doctest::Approx(1e-12).epsilon(1e-6));
  const auto post = ClassifierPosterior::fit(k, x, {1, 0}, s);
  const double p0 = post.mean(x[0]);
  const double p1 = std::max(1e-12, post.mean(x[1]));
  CHECK(cross_entropy_loss(post, x, {1, 0}) == doctest::Approx(-0.5 * (std::log(p0) + std::log(1.0 - p1))));
  CHECK_THROWS_AS((void)cross_entropy_loss(post, x, {1}), InvalidInput);
  CHECK_THROWS_AS((void)cross_entropy_loss(post, x, {1, 3}), InvalidInput);
}

TEST_CASE("validation battery passes") {
  for (const auto& c : run_validation(true)) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
}
