#include "kpz/config.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "kpz/errors.hpp"
#include "kpz/report.hpp"

namespace kpz {
namespace {

using nlohmann::json;

std::string joined(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Strict object view: every read marks its key, finish() rejects leftovers.
class Reader {
 public:
  Reader(const json& obj, std::string prefix)
      : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object())
      throw ConfigError("'" + (prefix_.empty() ? std::string("config") : prefix_) +
                        "' must be a JSON object");
  }

  bool has(const std::string& key) {
    return obj_.find(key) != obj_.end();
  }

  const json& require(const std::string& key) {
    auto it = obj_.find(key);
    if (it == obj_.end())
      throw ConfigError("missing required key '" + joined(prefix_, key) + "'");
    seen_.insert(key);
    return *it;
  }

  const json* optional(const std::string& key) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  double number(const std::string& key, const json& v) const {
    if (!v.is_number())
      throw ConfigError("'" + joined(prefix_, key) + "' must be a number");
    return v.get<double>();
  }

  double req_number(const std::string& key) { return number(key, require(key)); }

  double opt_number(const std::string& key, double dflt) {
    const json* v = optional(key);
    return v ? number(key, *v) : dflt;
  }

  std::uint64_t opt_uint(const std::string& key, std::uint64_t dflt) {
    const json* v = optional(key);
    if (!v) return dflt;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0)
      return static_cast<std::uint64_t>(v->get<std::int64_t>());
    throw ConfigError("'" + joined(prefix_, key) +
                      "' must be a nonnegative integer");
  }

  int opt_int(const std::string& key, int dflt) {
    const json* v = optional(key);
    if (!v) return dflt;
    if (!v->is_number_integer() && !v->is_number_unsigned())
      throw ConfigError("'" + joined(prefix_, key) + "' must be an integer");
    return v->get<int>();
  }

  bool opt_bool(const std::string& key, bool dflt) {
    const json* v = optional(key);
    if (!v) return dflt;
    if (!v->is_boolean())
      throw ConfigError("'" + joined(prefix_, key) + "' must be a boolean");
    return v->get<bool>();
  }

  std::string req_string(const std::string& key) {
    const json& v = require(key);
    if (!v.is_string())
      throw ConfigError("'" + joined(prefix_, key) + "' must be a string");
    return v.get<std::string>();
  }

  std::string opt_string(const std::string& key, const std::string& dflt) {
    const json* v = optional(key);
    if (!v) return dflt;
    if (!v->is_string())
      throw ConfigError("'" + joined(prefix_, key) + "' must be a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, const json& v) const {
    if (!v.is_array() || v.empty())
      throw ConfigError("'" + joined(prefix_, key) +
                        "' must be a non-empty array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
      if (!e.is_number())
        throw ConfigError("'" + joined(prefix_, key) +
                          "' must be a non-empty array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<double> req_numbers(const std::string& key) {
    return numbers(key, require(key));
  }

  std::vector<double> opt_numbers(const std::string& key,
                                  std::vector<double> dflt) {
    const json* v = optional(key);
    return v ? numbers(key, *v) : std::move(dflt);
  }

  Point2d opt_point(const std::string& key, Point2d dflt, bool* present = nullptr) {
    const json* v = optional(key);
    if (present) *present = v != nullptr;
    if (!v) return dflt;
    std::vector<double> xs = numbers(key, *v);
    if (xs.size() != 2)
      throw ConfigError("'" + joined(prefix_, key) +
                        "' must be an array of two numbers");
    return Point2d{xs[0], xs[1]};
  }

  Reader object(const std::string& key) {
    return Reader(require(key), joined(prefix_, key));
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (seen_.find(it.key()) == seen_.end())
        throw ConfigError("unknown key '" + joined(prefix_, it.key()) + "'");
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::set<std::string> seen_;
};

ModelSpec read_model(Reader& top) {
  const json* sub = top.optional("model");
  if (!sub) return ModelSpec::corner_growth();
  Reader r(*sub, "model");
  const std::string kind = r.req_string("kind");
  ModelSpec spec = ModelSpec::corner_growth();
  if (kind == "corner-growth") {
    // no extra keys
  } else if (kind == "two-sided") {
    spec = ModelSpec::two_sided(r.req_number("pi"), r.req_number("eta"));
  } else {
    throw ConfigError("'model.kind' must be corner-growth or two-sided, got '" +
                      kind + "'");
  }
  r.finish();
  return spec;
}

BulkSpec read_bulk(Reader& top) {
  const json* sub = top.optional("bulk");
  if (!sub) return BulkSpec::exponential();
  Reader r(*sub, "bulk");
  const std::string kind = r.req_string("kind");
  BulkSpec out = BulkSpec::exponential();
  if (kind == "exponential") {
    out = BulkSpec::exponential(r.opt_number("rate", 1.0));
  } else if (kind == "geometric") {
    out = BulkSpec::geometric(r.req_number("alpha"));
  } else {
    throw ConfigError("'bulk.kind' must be exponential or geometric, got '" +
                      kind + "'");
  }
  r.finish();
  return out;
}

PasepIc read_ic(Reader& top) {
  const json* sub = top.optional("ic");
  if (!sub) return PasepIc::step();
  Reader r(*sub, "ic");
  const std::string kind = r.req_string("kind");
  PasepIc out = PasepIc::step();
  if (kind == "step") {
    // no parameters
  } else if (kind == "step-bernoulli") {
    out = PasepIc::step_bernoulli(r.req_number("rho_plus"));
  } else if (kind == "two-sided-bernoulli") {
    out = PasepIc::two_sided(r.req_number("rho_minus"), r.req_number("rho_plus"));
  } else if (kind == "flat") {
    out = PasepIc::flat();
  } else {
    throw ConfigError(
        "'ic.kind' must be step, step-bernoulli, two-sided-bernoulli, or "
        "flat, got '" + kind + "'");
  }
  r.finish();
  return out;
}

ExperimentId parse_experiment(const std::string& name) {
  if (name == "decorr") return ExperimentId::Decorr;
  if (name == "off-char") return ExperimentId::OffChar;
  if (name == "exponent") return ExperimentId::Exponent;
  if (name == "dist") return ExperimentId::Dist;
  if (name == "projection") return ExperimentId::Projection;
  if (name == "pasep") return ExperimentId::Pasep;
  if (name == "polymer") return ExperimentId::Polymer;
  if (name == "classify") return ExperimentId::Classify;
  if (name == "shape") return ExperimentId::Shape;
  throw ConfigError("unknown experiment '" + name + "'");
}

void read_decorr(Reader& r, DecorrConfig& c) {
  c.model = read_model(r);
  c.kappa = r.opt_number("kappa", c.kappa);
  c.nu = r.opt_number("nu", c.nu);
  c.t_values = r.req_numbers("t_values");
  c.thresholds = r.opt_numbers("thresholds", c.thresholds);
  c.samples = static_cast<std::size_t>(r.opt_uint("samples", c.samples));
  c.ray_override = r.opt_point("ray", c.ray_override, &c.has_ray_override);
  c.allow_no_limit = r.opt_bool("allow_no_limit", c.allow_no_limit);
  c.debug_zero_weights = r.opt_bool("debug_zero_weights", c.debug_zero_weights);
}

}  // namespace

const char* experiment_name(ExperimentId id) {
  switch (id) {
    case ExperimentId::Decorr: return "decorr";
    case ExperimentId::OffChar: return "off-char";
    case ExperimentId::Exponent: return "exponent";
    case ExperimentId::Dist: return "dist";
    case ExperimentId::Projection: return "projection";
    case ExperimentId::Pasep: return "pasep";
    case ExperimentId::Polymer: return "polymer";
    case ExperimentId::Classify: return "classify";
    case ExperimentId::Shape: return "shape";
  }
  return "unknown";
}

void RunPlan::set_seed(std::uint64_t seed_value) {
  seed = seed_value;
  decorr.seed = seed_value;
  exponent.seed = seed_value;
  dist.seed = seed_value;
  projection.seed = seed_value;
  pasep.seed = seed_value;
  polymer.seed = seed_value;
}

void RunPlan::set_workers(int worker_count) {
  workers = worker_count;
  decorr.workers = worker_count;
  exponent.workers = worker_count;
  dist.workers = worker_count;
  projection.workers = worker_count;
  pasep.workers = worker_count;
  polymer.workers = worker_count;
}

RunContext RunPlan::context() const {
  RunContext ctx;
  ctx.out_dir = out_dir;
  ctx.run_id = run_id.empty() ? experiment_name(id) : run_id;
  ctx.seed = seed;
  ctx.config_hash = config_hash;
  ctx.workers = workers;
  return ctx;
}

RunPlan parse_run_plan(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  Reader r(doc, "");
  const json& ver = r.require("schema_version");
  if (!ver.is_number_integer() && !ver.is_number_unsigned())
    throw ConfigError("'schema_version' must be an integer");
  if (ver.get<std::int64_t>() != 1)
    throw ConfigError("unsupported schema_version " + ver.dump() +
                      "; this build reads version 1");

  RunPlan plan;
  plan.id = parse_experiment(r.req_string("experiment"));
  plan.out_dir = r.opt_string("out_dir", plan.out_dir);
  plan.run_id = r.opt_string("run_id", plan.run_id);
  plan.config_hash = hash_hex(fnv1a64(doc.dump()));

  switch (plan.id) {
    case ExperimentId::Decorr:
    case ExperimentId::OffChar:
      read_decorr(r, plan.decorr);
      break;
    case ExperimentId::Exponent: {
      plan.exponent.model = read_model(r);
      plan.exponent.kappa = r.opt_number("kappa", plan.exponent.kappa);
      plan.exponent.t_values = r.req_numbers("t_values");
      plan.exponent.samples =
          static_cast<std::size_t>(r.opt_uint("samples", plan.exponent.samples));
      plan.exponent.debug_zero_weights =
          r.opt_bool("debug_zero_weights", plan.exponent.debug_zero_weights);
      break;
    }
    case ExperimentId::Dist: {
      plan.dist.model = read_model(r);
      plan.dist.kappa = r.opt_number("kappa", plan.dist.kappa);
      plan.dist.t = r.opt_number("t", plan.dist.t);
      plan.dist.samples =
          static_cast<std::size_t>(r.opt_uint("samples", plan.dist.samples));
      plan.dist.reference = r.opt_string("reference", plan.dist.reference);
      plan.dist.goe_table_path = r.opt_string("goe_table", plan.dist.goe_table_path);
      break;
    }
    case ExperimentId::Projection: {
      ProjectionConfig& c = plan.projection;
      c.t = r.opt_number("t", c.t);
      c.nu = r.opt_number("nu", c.nu);
      c.tau = r.opt_number("tau", c.tau);
      c.theta_offsets = r.opt_numbers("theta_offsets", c.theta_offsets);
      c.spacelike_delta = r.opt_number("spacelike_delta", c.spacelike_delta);
      c.samples = static_cast<std::size_t>(r.opt_uint("samples", c.samples));
      c.control_samples = static_cast<std::size_t>(
          r.opt_uint("control_samples", c.control_samples));
      break;
    }
    case ExperimentId::Pasep: {
      PasepDecorrConfig& c = plan.pasep;
      c.p = r.opt_number("p", c.p);
      c.ic = read_ic(r);
      c.v = r.opt_number("v", c.v);
      c.u = r.opt_number("u", c.u);
      c.nu = r.opt_number("nu", c.nu);
      c.margin = r.opt_number("margin", c.margin);
      c.t_values = r.req_numbers("t_values");
      c.thresholds = r.opt_numbers("thresholds", c.thresholds);
      c.samples = static_cast<std::size_t>(r.opt_uint("samples", c.samples));
      c.debug_empty = r.opt_bool("debug_empty", c.debug_empty);
      break;
    }
    case ExperimentId::Polymer: {
      PolymerDecorrConfig& c = plan.polymer;
      c.beta = r.opt_number("beta", c.beta);
      c.bulk = read_bulk(r);
      c.p = r.opt_point("p", c.p);
      c.u = r.opt_point("u", c.u);
      c.nu = r.opt_number("nu", c.nu);
      c.t_values = r.req_numbers("t_values");
      c.thresholds = r.opt_numbers("thresholds", c.thresholds);
      c.samples = static_cast<std::size_t>(r.opt_uint("samples", c.samples));
      break;
    }
    case ExperimentId::Classify: {
      plan.classify.model = read_model(r);
      plan.classify.kappa = r.opt_number("kappa", plan.classify.kappa);
      break;
    }
    case ExperimentId::Shape: {
      ShapeConfig& c = plan.shape;
      const json* v = r.optional("v_values");
      if (v) {
        c.v_values = r.numbers("v_values", *v);
      } else {
        for (int k = -19; k <= 19; ++k) c.v_values.push_back(0.05 * k);
      }
      break;
    }
  }

  plan.set_seed(r.opt_uint("seed", plan.seed));
  plan.set_workers(r.opt_int("workers", plan.workers));
  r.finish();
  return plan;
}

RunPlan load_run_plan(const std::string& path) {
  std::string text;
  if (!read_text_file(path, &text))
    throw ConfigError("cannot read config file " + path);
  return parse_run_plan(text);
}

}  // namespace kpz
