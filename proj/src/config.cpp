#include "bore/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "bore/errors.hpp"

namespace bore {

using nlohmann::json;

namespace {

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json kernel_to_json(const KernelConfig& k) {
  return {{"family", to_string(k.family)},
          {"lengthscales", k.lengthscales},
          {"output_scale", k.output_scale},
          {"rq_alpha", k.rq_alpha}};
}

// Typed access to one JSON object with dotted-path diagnostics.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(field(key), "expected a number");
      out = v->get<double>();
    }
  }

  void optional_number(const std::string& key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
      } else if (v->is_number()) {
        out = v->get<double>();
      } else {
        throw ConfigError(field(key), "expected a number or null");
      }
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
      const auto value = v->get<long long>();
      if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max())
        throw ConfigError(field(key), "integer out of range");
      out = static_cast<int>(value);
    }
  }

  void seed(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) throw ConfigError(field(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(field(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  template <typename Parse>
  void enumeration(const std::string& key, Parse parse) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(field(key), "expected a string");
      try {
        parse(v->get<std::string>());
      } catch (const InvalidInput& e) {
        throw ConfigError(field(key), e.what());
      }
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

KernelConfig kernel_from_json(const json& node, const std::string& path) {
  KernelConfig k;
  Reader r(node, path);
  r.enumeration("family", [&](const std::string& s) { k.family = kernel_family_from_string(s); });
  if (const json* v = r.find("lengthscales")) {
    k.lengthscales.clear();
    if (v->is_number()) {
      k.lengthscales.push_back(v->get<double>());
    } else if (v->is_array()) {
      for (const auto& e : *v) {
        if (!e.is_number()) throw ConfigError(r.field("lengthscales"), "expected numbers");
        k.lengthscales.push_back(e.get<double>());
      }
    } else {
      throw ConfigError(r.field("lengthscales"), "expected a number or an array of numbers");
    }
  }
  r.number("output_scale", k.output_scale);
  r.number("rq_alpha", k.rq_alpha);
  r.finish();
  return k;
}

}  // namespace

json config_to_json(const RunConfig& c) {
  json objective = {
      {"kind", c.objective.kind == ObjectiveConfig::Kind::Synthetic ? "synthetic" : "analytic"},
      {"num_centers", c.objective.num_centers},
      {"domain_size", c.objective.domain_size},
      {"dim", c.objective.dim},
      {"tau", c.objective.tau},
      {"kernel", c.objective.kernel ? kernel_to_json(*c.objective.kernel) : json(nullptr)},
      {"function", to_string(c.objective.function)},
      {"noise_free", c.objective.noise_free},
      {"noise", {{"family", to_string(c.objective.noise.family)},
                 {"scale", c.objective.noise.scale},
                 {"dof", c.objective.noise.dof}}},
      {"seed", c.objective.seed ? json(*c.objective.seed) : json(nullptr)},
  };
  return {
      {"name", c.name},
      {"algorithm", to_string(c.algorithm)},
      {"gamma", c.gamma},
      {"fixed_tau", optional_to_json(c.fixed_tau)},
      {"lambda", c.lambda},
      {"delta", c.delta},
      {"norm_bound", optional_to_json(c.norm_bound)},
      {"fixed_beta", optional_to_json(c.fixed_beta)},
      {"kernel", kernel_to_json(c.kernel)},
      {"backend", to_string(c.backend)},
      {"num_features", c.num_features},
      {"gp", {{"lambda", c.gp.lambda},
              {"delta", c.gp.delta},
              {"noise_subgaussian", c.gp.noise_subgaussian},
              {"norm_bound", optional_to_json(c.gp.norm_bound)},
              {"fixed_beta", optional_to_json(c.gp.fixed_beta)}}},
      {"batch_size", c.batch_size},
      {"budget", c.budget},
      {"initial_points", c.initial_points},
      {"seed", c.seed},
      {"objective", objective},
      {"svgd", {{"step_size", c.svgd.step_size},
                {"decay", c.svgd.decay},
                {"steps", c.svgd.steps},
                {"rule", to_string(c.svgd.rule)},
                {"epsilon_floor", c.svgd.epsilon_floor}}},
      {"box_search", {{"probes", c.box_search.probes},
                      {"starts", c.box_search.starts},
                      {"steps", c.box_search.steps},
                      {"initial_step", c.box_search.initial_step}}},
      {"consistency_mode", c.consistency_mode},
      {"diagnostics", c.diagnostics},
      {"record_timing", c.record_timing},
  };
}

RunConfig config_from_json(const json& tree) {
  RunConfig c;
  Reader r(tree, "");
  r.string("name", c.name);
  r.enumeration("algorithm", [&](const std::string& s) { c.algorithm = algorithm_from_string(s); });
  r.number("gamma", c.gamma);
  r.optional_number("fixed_tau", c.fixed_tau);
  r.number("lambda", c.lambda);
  r.number("delta", c.delta);
  r.optional_number("norm_bound", c.norm_bound);
  r.optional_number("fixed_beta", c.fixed_beta);
  if (const json* v = r.find("kernel")) c.kernel = kernel_from_json(*v, "kernel");
  r.enumeration("backend", [&](const std::string& s) { c.backend = classifier_backend_from_string(s); });
  r.integer("num_features", c.num_features);
  if (const json* v = r.find("gp")) {
    Reader g(*v, "gp");
    g.number("lambda", c.gp.lambda);
    g.number("delta", c.gp.delta);
    g.number("noise_subgaussian", c.gp.noise_subgaussian);
    g.optional_number("norm_bound", c.gp.norm_bound);
    g.optional_number("fixed_beta", c.gp.fixed_beta);
    g.finish();
  }
  r.integer("batch_size", c.batch_size);
  r.integer("budget", c.budget);
  r.integer("initial_points", c.initial_points);
  r.seed("seed", c.seed);
  if (const json* v = r.find("objective")) {
    Reader o(*v, "objective");
    auto& oc = c.objective;
    o.enumeration("kind", [&](const std::string& s) {
      if (s == "synthetic") {
        oc.kind = ObjectiveConfig::Kind::Synthetic;
      } else if (s == "analytic") {
        oc.kind = ObjectiveConfig::Kind::Analytic;
      } else {
        throw InvalidInput("expected 'synthetic' or 'analytic', got '" + s + "'");
      }
    });
    o.integer("num_centers", oc.num_centers);
    o.integer("domain_size", oc.domain_size);
    o.integer("dim", oc.dim);
    o.number("tau", oc.tau);
    if (const json* k = o.find("kernel")) {
      if (k->is_null()) {
        oc.kernel.reset();
      } else {
        oc.kernel = kernel_from_json(*k, "objective.kernel");
      }
    }
    o.enumeration("function", [&](const std::string& s) { oc.function = analytic_function_from_string(s); });
    o.boolean("noise_free", oc.noise_free);
    if (const json* n = o.find("noise")) {
      Reader nr(*n, "objective.noise");
      nr.enumeration("family", [&](const std::string& s) { oc.noise.family = noise_family_from_string(s); });
      nr.number("scale", oc.noise.scale);
      nr.number("dof", oc.noise.dof);
      nr.finish();
    }
    if (const json* s = o.find("seed")) {
      if (s->is_null()) {
        oc.seed.reset();
      } else if (s->is_number_unsigned()) {
        oc.seed = s->get<std::uint64_t>();
      } else {
        throw ConfigError("objective.seed", "expected a non-negative integer or null");
      }
    }
    o.finish();
  }
  if (const json* v = r.find("svgd")) {
    Reader s(*v, "svgd");
    s.number("step_size", c.svgd.step_size);
    s.number("decay", c.svgd.decay);
    s.integer("steps", c.svgd.steps);
    s.enumeration("rule", [&](const std::string& name) { c.svgd.rule = step_rule_from_string(name); });
    s.number("epsilon_floor", c.svgd.epsilon_floor);
    s.finish();
  }
  if (const json* v = r.find("box_search")) {
    Reader b(*v, "box_search");
    b.integer("probes", c.box_search.probes);
    b.integer("starts", c.box_search.starts);
    b.integer("steps", c.box_search.steps);
    b.number("initial_step", c.box_search.initial_step);
    b.finish();
  }
  r.boolean("consistency_mode", c.consistency_mode);
  r.boolean("diagnostics", c.diagnostics);
  r.boolean("record_timing", c.record_timing);
  r.finish();
  return c;
}

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n');
    std::ostringstream msg;
    msg << "syntax error at line " << line << ": " << e.what();
    throw ConfigError(path.string(), msg.str());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  const json tree = parse_json_file(path);
  RunConfig c;
  try {
    c = config_from_json(tree);
    c.validate();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    const std::string message = e.field().empty() ? what : what.substr(e.field().size() + 2);
    throw ConfigError(e.field(), path.string() + ": " + message);
  }
  return c;
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << config_to_json(config).dump(2) << '\n';
}

}  // namespace bore
