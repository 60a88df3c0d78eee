#include "bore/experiments.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <set>
#include <thread>

#include "bore/config.hpp"
#include "bore/errors.hpp"
#include "bore/random.hpp"

namespace bore {

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("BORE_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return "results";
}

RunConfig theory_config(Algorithm algorithm, std::uint64_t seed, int budget) {
  RunConfig c;
  c.name = "theory";
  c.algorithm = algorithm;
  c.fixed_tau = 0.0;
  c.lambda = 0.025;
  c.delta = 0.1;
  c.norm_bound = 1.0;
  c.kernel = KernelConfig{KernelFamily::SquaredExponential, {0.1}, 1.0, 1.0};
  c.gp.lambda = 0.01;
  c.gp.delta = 0.1;
  c.budget = budget;
  c.seed = seed;
  c.objective.kind = ObjectiveConfig::Kind::Synthetic;
  c.objective.num_centers = 5;
  c.objective.domain_size = 100;
  c.objective.dim = 1;
  c.objective.tau = 0.0;
  c.objective.noise = NoiseConfig{NoiseFamily::Gaussian, 0.1, 3.0};
  c.objective.seed = seed;
  return c;
}

std::uint64_t trial_seed(std::uint64_t base, int trial) {
  return derive_seed(base, 1000 + static_cast<std::uint64_t>(trial));
}

void parallel_for(int n, int jobs, const std::function<void(int)>& task) {
  if (n <= 0) return;
  const int workers = std::max(1, std::min(jobs, n));
  std::vector<std::exception_ptr> errors(n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

ExperimentOutput run_theory(const TheoryOptions& options) {
  if (options.trials < 1) throw ConfigError("trials", "must be >= 1");
  if (options.budget < 1) throw ConfigError("budget", "must be >= 1");
  if (options.algorithms.empty()) throw ConfigError("algorithms", "must not be empty");
  const auto dir = options.output_dir.empty() ? default_output_dir() : options.output_dir;
  const int n_alg = static_cast<int>(options.algorithms.size());
  std::vector<RunResult> results(static_cast<std::size_t>(n_alg * options.trials));
  parallel_for(n_alg * options.trials, options.jobs, [&](int k) {
    const int a = k / options.trials;
    const int trial = k % options.trials;
    RunConfig c = theory_config(options.algorithms[a], trial_seed(options.seed, trial), options.budget);
    c.record_timing = options.record_timing;
    results[k] = run(c);
  });

  ExperimentOutput out;
  for (int a = 0; a < n_alg; ++a) {
    const Algorithm alg = options.algorithms[a];
    ResultsTable table;
    auto& bucket = out.runs[to_string(alg)];
    for (int trial = 0; trial < options.trials; ++trial) {
      auto& r = results[a * options.trials + trial];
      table.append(r, run_id("theory", alg, r.config.seed));
      bucket.push_back(std::move(r));
    }
    const auto path = dir / results_filename("theory", alg, options.seed);
    write_csv(table, path);
    out.files.push_back(path);
  }
  out.summary = summarize(out.runs, options.seed);
  out.summary["experiment"] = "theory";
  out.summary["base_seed"] = options.seed;
  out.summary["trials"] = options.trials;
  out.summary["budget"] = options.budget;
  const auto summary_path = dir / "summary.json";
  write_text(summary_path, out.summary.dump(2) + "\n");
  out.files.push_back(summary_path);
  return out;
}

ExperimentSuite load_suite(const std::filesystem::path& path) {
  const nlohmann::json tree = parse_json_file(path);
  if (!tree.is_object()) throw ConfigError(path.string(), "suite file must contain an object");
  ExperimentSuite suite;
  for (auto it = tree.begin(); it != tree.end(); ++it) {
    const std::string& key = it.key();
    if (key != "name" && key != "variants" && key != "seeds" && key != "output_dir")
      throw ConfigError(key, path.string() + ": unknown key");
  }
  if (tree.contains("name")) {
    if (!tree["name"].is_string()) throw ConfigError("name", path.string() + ": expected a string");
    suite.name = tree["name"].get<std::string>();
  }
  if (tree.contains("output_dir")) {
    if (!tree["output_dir"].is_string()) throw ConfigError("output_dir", path.string() + ": expected a string");
    suite.output_dir = tree["output_dir"].get<std::string>();
  }
  if (tree.contains("seeds")) {
    suite.seeds.clear();
    const auto& seeds = tree["seeds"];
    if (!seeds.is_array() || seeds.empty()) throw ConfigError("seeds", path.string() + ": expected a non-empty array");
    for (const auto& s : seeds) {
      if (!s.is_number_unsigned()) throw ConfigError("seeds", path.string() + ": seeds must be non-negative integers");
      suite.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  if (!tree.contains("variants") || !tree["variants"].is_array() || tree["variants"].empty())
    throw ConfigError("variants", path.string() + ": expected a non-empty array of run configs");
  std::set<std::string> names;
  for (std::size_t i = 0; i < tree["variants"].size(); ++i) {
    const std::string prefix = "variants[" + std::to_string(i) + "]";
    RunConfig c;
    try {
      c = config_from_json(tree["variants"][i]);
      c.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(prefix + "." + e.field(), path.string() + ": " + e.what());
    }
    const std::string key = c.name + "/" + to_string(c.algorithm);
    if (!names.insert(key).second)
      throw ConfigError(prefix + ".name", path.string() + ": duplicate (name, algorithm) pair '" + key + "'");
    suite.variants.push_back(std::move(c));
  }
  return suite;
}

ExperimentOutput run_suite(const ExperimentSuite& suite, int jobs) {
  if (suite.variants.empty()) throw ConfigError("variants", "suite has no variants");
  if (suite.seeds.empty()) throw ConfigError("seeds", "suite has no seeds");
  const auto dir = suite.output_dir.empty() ? default_output_dir() : suite.output_dir;
  const int nv = static_cast<int>(suite.variants.size());
  const int ns = static_cast<int>(suite.seeds.size());
  std::vector<RunResult> results(static_cast<std::size_t>(nv * ns));
  parallel_for(nv * ns, jobs, [&](int k) {
    RunConfig c = suite.variants[k / ns];
    c.seed = suite.seeds[k % ns];
    results[k] = run(c);
  });
  ExperimentOutput out;
  for (int k = 0; k < nv * ns; ++k) {
    auto& r = results[k];
    const auto& c = r.config;
    ResultsTable table;
    table.append(r, run_id(c.name, c.algorithm, c.seed));
    const auto path = dir / results_filename(c.name, c.algorithm, c.seed);
    write_csv(table, path);
    out.files.push_back(path);
    out.runs[c.name + "/" + to_string(c.algorithm)].push_back(std::move(r));
  }
  out.summary = summarize(out.runs, suite.seeds.front());
  out.summary["experiment"] = suite.name;
  const auto summary_path = dir / "summary.json";
  write_text(summary_path, out.summary.dump(2) + "\n");
  out.files.push_back(summary_path);
  return out;
}

}  // namespace bore
