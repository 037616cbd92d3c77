#pragma once

// JSON wire formats. Every document carries "schema": "hankel/v1".

#include <json.hpp>
#include <optional>

#include "hankel/measure.hpp"
#include "hankel/moment_analysis.hpp"
#include "hankel/operators.hpp"
#include "hankel/spectral.hpp"

namespace hankel {

inline constexpr const char* kSchemaVersion = "hankel/v1";

/// Accepts {"atoms": [...], "densities": [...]} or {"family": name, "params": {...}}.
/// Infinite density endpoints may be written as "inf" / "-inf".
/// Throws SchemaError on malformed documents.
Measure measure_from_json(const nlohmann::json& j);
/// Throws SchemaError when a density was built from a callable.
nlohmann::json measure_to_json(const Measure& m);

/// {"values": [...], "decay": symbol | null, "decay_rate": a}; with log
/// moments, "log_values" and "signs" replace "values".
nlohmann::json moments_to_json(const MomentSequence& q);
nlohmann::json log_moments_to_json(const LogMoments& lm, std::optional<DecayDescriptor> decay);
MomentSequence moments_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ClassificationReport& r);
nlohmann::json profile_to_json(const SpectralProfile& p);
nlohmann::json tail_evidence_to_json(const TailEvidence& t);

/// {"g": [...]}
CoeffVector coeffs_from_json(const nlohmann::json& j);
nlohmann::json coeffs_to_json(const CoeffVector& g);

/// Array of [lambda, lhs, rhs, diff].
nlohmann::json intertwining_to_json(const IntertwiningReport& r);

/// Overrides fields present in j; validates the result.
QuadratureConfig quadrature_config_from_json(const nlohmann::json& j, QuadratureConfig base = {});
nlohmann::json quadrature_config_to_json(const QuadratureConfig& cfg);

}  // namespace hankel
