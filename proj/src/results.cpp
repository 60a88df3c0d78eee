#include "bore/results.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "bore/errors.hpp"
#include "bore/random.hpp"

namespace bore {

void ResultsTable::append(const RunResult& result, const std::string& id) {
  double running = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rec : result.records) {
    for (std::size_t b = 0; b < rec.points.size(); ++b) {
      ResultRow row;
      row.run_id = id;
      row.algorithm = to_string(result.config.algorithm);
      row.seed = result.config.seed;
      row.t = rec.t;
      row.batch_index = static_cast<int>(b);
      row.x = rec.points[b];
      row.y = rec.observations.at(b);
      row.tau = rec.tau;
      row.r_t = rec.instant_regret.at(b);
      running += row.r_t;
      best = std::min(best, row.r_t);
      row.R_t = running;
      row.simple_regret = best;
      row.beta_t = rec.beta;
      if (b < rec.sigma_at_query.size()) row.sigma_at_query = rec.sigma_at_query[b];
      row.info_gain = rec.info_gain;
      row.thm2_bound = rec.thm2_bound;
      row.thm3_bound = rec.thm3_bound;
      row.dist_regret = rec.dist_regret;
      row.kl_estimate = rec.kl_estimate;
      row.wall_ms = rec.wall_ms;
      rows.push_back(std::move(row));
    }
  }
}

std::string run_id(const std::string& name, Algorithm algorithm, std::uint64_t seed) {
  return name + "_" + to_string(algorithm) + "_seed" + std::to_string(seed);
}

std::string results_filename(const std::string& name, Algorithm algorithm, std::uint64_t seed) {
  return run_id(name, algorithm, seed) + ".csv";
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_optional(const std::optional<double>& value) { return value ? format_double(*value) : "null"; }

std::string to_csv(const ResultsTable& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < std::size(kCsvColumns); ++i) out << (i ? "," : "") << kCsvColumns[i];
  out << '\n';
  for (const auto& r : table.rows) {
    std::string x;
    for (Eigen::Index k = 0; k < r.x.size(); ++k) x += (k ? ";" : "") + format_double(r.x(k));
    out << r.run_id << ',' << r.algorithm << ',' << r.seed << ',' << r.t << ',' << r.batch_index << ',' << x << ','
        << format_double(r.y) << ',' << format_optional(r.tau) << ',' << format_double(r.r_t) << ','
        << format_double(r.R_t) << ',' << format_double(r.simple_regret) << ',' << format_optional(r.beta_t) << ','
        << format_optional(r.sigma_at_query) << ',' << format_double(r.info_gain) << ','
        << format_optional(r.thm2_bound) << ',' << format_optional(r.thm3_bound) << ','
        << format_optional(r.dist_regret) << ',' << format_optional(r.kl_estimate) << ','
        << format_optional(r.wall_ms) << '\n';
  }
  return out.str();
}

void write_csv(const ResultsTable& table, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_csv(table);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    std::ostringstream msg;
    msg << "line " << line << ": cannot parse number '" << s << "'";
    throw InvalidInput(msg.str());
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s, std::size_t line) {
  if (s == "null") return std::nullopt;
  return parse_double(s, line);
}

}  // namespace

ResultsTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput(path.string() + " is empty");
  const auto header = split(line, ',');
  if (header.size() != std::size(kCsvColumns) || !std::equal(header.begin(), header.end(), std::begin(kCsvColumns)))
    throw InvalidInput(path.string() + ": unexpected header");
  ResultsTable table;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != std::size(kCsvColumns)) {
      std::ostringstream msg;
      msg << path.string() << " line " << n << ": expected " << std::size(kCsvColumns) << " fields, got " << f.size();
      throw InvalidInput(msg.str());
    }
    ResultRow r;
    r.run_id = f[0];
    r.algorithm = f[1];
    r.seed = std::stoull(f[2]);
    r.t = std::stoi(f[3]);
    r.batch_index = std::stoi(f[4]);
    const auto xs = split(f[5], ';');
    r.x.resize(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) r.x(static_cast<Eigen::Index>(k)) = parse_double(xs[k], n);
    r.y = parse_double(f[6], n);
    r.tau = parse_optional(f[7], n);
    r.r_t = parse_double(f[8], n);
    r.R_t = parse_double(f[9], n);
    r.simple_regret = parse_double(f[10], n);
    r.beta_t = parse_optional(f[11], n);
    r.sigma_at_query = parse_optional(f[12], n);
    r.info_gain = parse_double(f[13], n);
    r.thm2_bound = parse_optional(f[14], n);
    r.thm3_bound = parse_optional(f[15], n);
    r.dist_regret = parse_optional(f[16], n);
    r.kl_estimate = parse_optional(f[17], n);
    r.wall_ms = parse_optional(f[18], n);
    table.rows.push_back(std::move(r));
  }
  return table;
}

namespace {

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

}  // namespace

ConfidenceInterval bootstrap_mean_ci(std::span<const double> values, int resamples, double level, std::uint64_t seed) {
  if (values.empty()) throw InvalidInput("bootstrap of an empty sample");
  if (resamples < 1) throw InvalidInput("bootstrap needs at least one resample");
  if (!(level > 0.0 && level < 1.0)) throw InvalidInput("confidence level must lie in (0, 1)");
  const double n = static_cast<double>(values.size());
  ConfidenceInterval ci;
  ci.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  Rng rng = make_rng(seed, Stream::Bootstrap);
  std::vector<double> means;
  means.reserve(resamples);
  for (int b = 0; b < resamples; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto j = std::min(values.size() - 1, static_cast<std::size_t>(uniform01(rng) * n));
      s += values[j];
    }
    means.push_back(s / n);
  }
  std::sort(means.begin(), means.end());
  ci.lower = std::min(ci.mean, percentile(means, 0.5 * (1.0 - level)));
  ci.upper = std::max(ci.mean, percentile(means, 0.5 * (1.0 + level)));
  return ci;
}

nlohmann::json summarize(const std::map<std::string, std::vector<RunResult>>& runs, std::uint64_t seed,
                         int resamples) {
  using nlohmann::json;
  json algorithms = json::object();
  std::uint64_t stream = 0;
  for (const auto& [name, results] : runs) {
    ++stream;
    if (results.empty()) continue;
    std::size_t iterations = results.front().records.size();
    for (const auto& r : results) iterations = std::min(iterations, r.records.size());
    json cumulative = {{"mean", json::array()}, {"lower", json::array()}, {"upper", json::array()}};
    json simple = cumulative;
    json its = json::array();
    for (std::size_t t = 0; t < iterations; ++t) {
      std::vector<double> c;
      std::vector<double> s;
      for (const auto& r : results) {
        c.push_back(r.records[t].cumulative_regret);
        s.push_back(r.records[t].simple_regret);
      }
      const std::uint64_t sd = derive_seed(derive_seed(seed, stream), t);
      const auto ci_c = bootstrap_mean_ci(c, resamples, 0.95, sd);
      const auto ci_s = bootstrap_mean_ci(s, resamples, 0.95, derive_seed(sd, 1));
      its.push_back(results.front().records[t].t);
      cumulative["mean"].push_back(ci_c.mean);
      cumulative["lower"].push_back(ci_c.lower);
      cumulative["upper"].push_back(ci_c.upper);
      simple["mean"].push_back(ci_s.mean);
      simple["lower"].push_back(ci_s.lower);
      simple["upper"].push_back(ci_s.upper);
    }
    json seeds = json::array();
    for (const auto& r : results) seeds.push_back(r.config.seed);
    algorithms[name] = {{"trials", results.size()},
                        {"seeds", seeds},
                        {"iterations", its},
                        {"cumulative_regret", cumulative},
                        {"simple_regret", simple}};
  }
  return {{"ci_level", 0.95},
          {"ci_method", "percentile_bootstrap"},
          {"resamples", resamples},
          {"algorithms", algorithms}};
}

double cross_entropy_loss(const ClassifierModel& model, const PointList& inputs, const Labels& labels, double eps) {
  if (inputs.empty()) throw InvalidInput("cross-entropy of an empty dataset");
  if (inputs.size() != labels.size()) throw InvalidInput("one label per input required");
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidInput("clipping epsilon must lie in (0, 0.5)");
  check_binary_labels(labels);
  double total = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const double p = std::clamp(model.mean(inputs[i]), eps, 1.0 - eps);
    total -= labels[i] == 1 ? std::log(p) : std::log1p(-p);
  }
  return total / static_cast<double>(inputs.size());
}

}  // namespace bore
