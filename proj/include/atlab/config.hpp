#pragma once

#include <string>

#include <json.hpp>

#include "atlab/simulation.hpp"

namespace atlab {

/// Parses and fully validates a configuration document. Structural problems
/// (unknown/missing keys, wrong types) raise SchemaError with the offending
/// key path; semantic problems raise ValidationError.
SimulationConfig parse_config_json(const nlohmann::json& doc);

/// Same, reading the document from a file.
SimulationConfig parse_config_file(const std::string& path);

/// Distribution sub-schema, shared with the weights command. `path` names
/// the document location for error messages.
EffectDistribution distribution_from_json(const nlohmann::json& doc,
                                          const std::string& path);

nlohmann::json distribution_to_json(const EffectDistribution& dist);

/// Canonical (sorted-key, compact) JSON rebuild of a resolved configuration.
/// Semantically identical documents canonicalize identically.
nlohmann::json canonical_config_json(const SimulationConfig& config);

/// FNV-1a 64-bit content hash of the canonical configuration, as 16 hex
/// digits.
std::string config_digest(const SimulationConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace atlab
