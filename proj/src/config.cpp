#include "atlab/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "atlab/errors.hpp"

namespace atlab {

namespace {

using nlohmann::json;

void require_object(const json& doc, const std::string& path) {
  if (!doc.is_object()) {
    throw SchemaError(path + " must be an object");
  }
}

void reject_unknown_keys(const json& doc, const std::set<std::string>& known,
                         const std::string& path) {
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) {
      throw SchemaError("unknown key '" + key + "' at " + path);
    }
  }
}

const json& require_key(const json& doc, const std::string& key,
                        const std::string& path) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw SchemaError("missing key '" + key + "' at " + path);
  }
  return *it;
}

double get_number(const json& doc, const std::string& key, const std::string& path) {
  const json& v = require_key(doc, key, path);
  if (!v.is_number()) {
    throw SchemaError(path + "." + key + " must be a number");
  }
  return v.get<double>();
}

bool get_bool(const json& doc, const std::string& key, const std::string& path,
              bool fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_boolean()) {
    throw SchemaError(path + "." + key + " must be a boolean");
  }
  return it->get<bool>();
}

std::string get_string(const json& doc, const std::string& key,
                       const std::string& path) {
  const json& v = require_key(doc, key, path);
  if (!v.is_string()) {
    throw SchemaError(path + "." + key + " must be a string");
  }
  return v.get<std::string>();
}

EstimatorKind estimator_from_json(const json& doc, const std::string& path) {
  require_object(doc, path);
  const std::string kind = get_string(doc, "kind", path);
  EstimatorKind est;
  if (kind == "oracle_tau_mean") {
    reject_unknown_keys(doc, {"kind"}, path);
    est.tag = EstimatorTag::oracle_tau_mean;
  } else if (kind == "difference_in_means") {
    reject_unknown_keys(doc, {"kind"}, path);
    est.tag = EstimatorTag::difference_in_means;
  } else if (kind == "synthetic_normal") {
    reject_unknown_keys(doc, {"kind", "sigma"}, path);
    est.tag = EstimatorTag::synthetic_normal;
    est.synthetic_sigma = get_number(doc, "sigma", path);
    if (!(est.synthetic_sigma > 0.0)) {
      throw ValidationError(path + ".sigma must be > 0");
    }
  } else {
    throw SchemaError(path + ".kind: unknown estimator '" + kind + "'");
  }
  return est;
}

}  // namespace

EffectDistribution distribution_from_json(const json& doc, const std::string& path) {
  require_object(doc, path);
  const std::string kind = get_string(doc, "kind", path);
  try {
    if (kind == "two_point") {
      reject_unknown_keys(doc, {"kind", "a", "b", "p"}, path);
      return EffectDistribution::two_point(get_number(doc, "a", path),
                                           get_number(doc, "b", path),
                                           get_number(doc, "p", path));
    }
    if (kind == "uniform") {
      reject_unknown_keys(doc, {"kind", "lo", "hi"}, path);
      return EffectDistribution::uniform(get_number(doc, "lo", path),
                                         get_number(doc, "hi", path));
    }
    if (kind == "scaled_beta") {
      reject_unknown_keys(doc, {"kind", "alpha", "beta", "lo", "hi"}, path);
      return EffectDistribution::scaled_beta(
          get_number(doc, "alpha", path), get_number(doc, "beta", path),
          get_number(doc, "lo", path), get_number(doc, "hi", path));
    }
    if (kind == "degenerate") {
      reject_unknown_keys(doc, {"kind", "value"}, path);
      return EffectDistribution::degenerate(get_number(doc, "value", path));
    }
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  throw SchemaError(path + ".kind: unknown distribution '" + kind + "'");
}

json distribution_to_json(const EffectDistribution& dist) {
  json doc;
  doc["kind"] = to_string(dist.kind());
  switch (dist.kind()) {
    case EffectKind::two_point: {
      const auto& p = dist.two_point_params();
      doc["a"] = p.a;
      doc["b"] = p.b;
      doc["p"] = p.p;
      break;
    }
    case EffectKind::uniform: {
      const auto& p = dist.uniform_params();
      doc["lo"] = p.lo;
      doc["hi"] = p.hi;
      break;
    }
    case EffectKind::scaled_beta: {
      const auto& p = dist.scaled_beta_params();
      doc["alpha"] = p.alpha;
      doc["beta"] = p.beta;
      doc["lo"] = p.lo;
      doc["hi"] = p.hi;
      break;
    }
    case EffectKind::degenerate:
      doc["value"] = dist.degenerate_params().value;
      break;
  }
  return doc;
}

SimulationConfig parse_config_json(const json& doc) {
  require_object(doc, "$");
  reject_unknown_keys(doc,
                      {"population", "estimator", "n_grid", "replications", "master_seed",
                       "record_replications", "negative_control"},
                      "$");

  SimulationConfig config;

  const json& pop = require_key(doc, "population", "$");
  require_object(pop, "$.population");
  reject_unknown_keys(pop, {"baseline", "effect", "assignment_prob"}, "$.population");
  config.population.baseline = distribution_from_json(
      require_key(pop, "baseline", "$.population"), "$.population.baseline");
  config.population.effect = distribution_from_json(
      require_key(pop, "effect", "$.population"), "$.population.effect");
  config.population.assignment_prob = get_number(pop, "assignment_prob", "$.population");

  config.estimator = estimator_from_json(require_key(doc, "estimator", "$"), "$.estimator");

  const json& grid = require_key(doc, "n_grid", "$");
  if (!grid.is_array() || grid.empty()) {
    throw SchemaError("$.n_grid must be a nonempty array of integers");
  }
  for (const json& v : grid) {
    if (!v.is_number_integer()) {
      throw SchemaError("$.n_grid must contain integers only");
    }
    config.n_grid.push_back(v.get<std::int64_t>());
  }

  const json& reps = require_key(doc, "replications", "$");
  if (!reps.is_number_integer()) {
    throw SchemaError("$.replications must be an integer");
  }
  config.replications = reps.get<std::int64_t>();

  const json& seed = require_key(doc, "master_seed", "$");
  if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() &&
                                    seed.get<std::int64_t>() < 0)) {
    throw SchemaError("$.master_seed must be a nonnegative integer");
  }
  config.master_seed = seed.get<std::uint64_t>();

  config.record_replications = get_bool(doc, "record_replications", "$", false);
  config.negative_control = get_bool(doc, "negative_control", "$", false);

  validate(config);
  return config;
}

SimulationConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open configuration file: " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("configuration is not valid JSON: ") + e.what());
  }
  return parse_config_json(doc);
}

json canonical_config_json(const SimulationConfig& config) {
  json doc;
  doc["population"]["baseline"] = distribution_to_json(config.population.baseline);
  doc["population"]["effect"] = distribution_to_json(config.population.effect);
  doc["population"]["assignment_prob"] = config.population.assignment_prob;
  doc["estimator"]["kind"] = to_string(config.estimator.tag);
  if (config.estimator.tag == EstimatorTag::synthetic_normal) {
    doc["estimator"]["sigma"] = config.estimator.synthetic_sigma;
  }
  doc["n_grid"] = config.n_grid;
  doc["replications"] = config.replications;
  doc["master_seed"] = config.master_seed;
  doc["record_replications"] = config.record_replications;
  doc["negative_control"] = config.negative_control;
  return doc;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_digest(const SimulationConfig& config) {
  const std::string canonical = canonical_config_json(config).dump();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

}  // namespace atlab
