#include "hankel/json_io.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hankel/errors.hpp"

namespace hankel {

using nlohmann::json;

namespace {

double read_number(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw SchemaError(std::string("expected a number for '") + what + "'");
}

json write_number(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  return v;
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

EndpointSingularity parse_singular(const std::string& s) {
  if (s == "none") return EndpointSingularity::none;
  if (s == "left") return EndpointSingularity::left;
  if (s == "right") return EndpointSingularity::right;
  throw SchemaError("singular must be none|left|right, got '" + s + "'");
}

const char* singular_name(EndpointSingularity s) {
  switch (s) {
    case EndpointSingularity::left: return "left";
    case EndpointSingularity::right: return "right";
    default: return "none";
  }
}

void check_schema(const json& j) {
  if (j.is_object() && j.contains("schema") && j.at("schema") != kSchemaVersion) {
    throw SchemaError("unsupported schema '" + j.at("schema").dump() + "'");
  }
}

}  // namespace

Measure measure_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("measure: expected a JSON object");
  check_schema(j);
  try {
    if (j.contains("family")) {
      if (!j.at("family").is_string()) throw SchemaError("measure: family must be a string");
      std::map<std::string, double> params;
      if (j.contains("params")) {
        if (!j.at("params").is_object()) throw SchemaError("measure: params must be an object");
        for (const auto& [key, value] : j.at("params").items()) params[key] = read_number(value, key.c_str());
      }
      return Measure::from_family(j.at("family").get<std::string>(), params);
    }
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
      if (!j.at("atoms").is_array()) throw SchemaError("measure: atoms must be an array");
      for (const json& a : j.at("atoms")) {
        atoms.push_back({read_number(require(a, "x"), "x"), read_number(require(a, "w"), "w")});
      }
    }
    std::vector<DensityPiece> pieces;
    if (j.contains("densities")) {
      if (!j.at("densities").is_array()) throw SchemaError("measure: densities must be an array");
      for (const json& d : j.at("densities")) {
        const json& expr = require(d, "expr");
        if (!expr.is_string()) throw SchemaError("measure: expr must be a string");
        EndpointSingularity s = EndpointSingularity::none;
        if (d.contains("singular")) s = parse_singular(d.at("singular").get<std::string>());
        pieces.push_back({read_number(require(d, "a"), "a"), read_number(require(d, "b"), "b"),
                          Expr::parse(expr.get<std::string>()), s});
      }
    }
    if (atoms.empty() && pieces.empty() && !j.contains("atoms") && !j.contains("densities")) {
      throw SchemaError("measure: needs 'family' or at least one of 'atoms', 'densities'");
    }
    return Measure(std::move(atoms), std::move(pieces));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("measure: ") + e.what());
  } catch (const ArgumentError& e) {
    throw SchemaError(std::string("measure: ") + e.what());
  }
}

json measure_to_json(const Measure& m) {
  json j;
  j["schema"] = kSchemaVersion;
  if (m.family()) {
    j["family"] = m.family()->name;
    j["params"] = json::object();
    for (const auto& [k, v] : m.family()->params) j["params"][k] = v;
    return j;
  }
  j["atoms"] = json::array();
  for (const Atom& a : m.atoms()) j["atoms"].push_back({{"x", a.x}, {"w", a.w}});
  j["densities"] = json::array();
  for (const DensityPiece& p : m.densities()) {
    if (!p.density.serializable()) {
      throw SchemaError("measure: density '" + p.density.to_string() + "' is not serializable");
    }
    j["densities"].push_back({{"a", write_number(p.a)},
                              {"b", write_number(p.b)},
                              {"expr", p.density.to_string()},
                              {"singular", singular_name(p.singular)}});
  }
  return j;
}

namespace {

void write_decay(json& j, const std::optional<DecayDescriptor>& decay) {
  if (decay) {
    j["decay"] = std::string(decay_symbol(decay->kind));
    if (decay->kind == DecayClass::geometric || decay->kind == DecayClass::little_o_geometric) {
      j["decay_rate"] = decay->rate;
    }
  } else {
    j["decay"] = nullptr;
  }
}

}  // namespace

json moments_to_json(const MomentSequence& q) {
  json j;
  j["schema"] = kSchemaVersion;
  j["values"] = q.values;
  write_decay(j, q.decay);
  return j;
}

json log_moments_to_json(const LogMoments& lm, std::optional<DecayDescriptor> decay) {
  json j;
  j["schema"] = kSchemaVersion;
  j["log_values"] = json::array();
  for (double v : lm.log_abs) j["log_values"].push_back(write_number(v));
  j["signs"] = lm.sign;
  write_decay(j, decay);
  return j;
}

MomentSequence moments_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("moments: expected a JSON object");
  check_schema(j);
  if (!j.contains("values")) {
    if (j.contains("log_values")) {
      throw SchemaError("moments: log-space document has no linear 'values'");
    }
    throw SchemaError("moments: missing field 'values'");
  }
  MomentSequence q;
  try {
    const json& values = j.at("values");
    if (!values.is_array()) throw SchemaError("moments: values must be an array");
    for (const json& v : values) {
      if (!v.is_number()) throw SchemaError("moments: values must be numbers");
      q.values.push_back(v.get<double>());
    }
    if (j.contains("decay") && !j.at("decay").is_null()) {
      DecayDescriptor d;
      d.kind = parse_decay_symbol(j.at("decay").get<std::string>());
      if (d.kind == DecayClass::geometric || d.kind == DecayClass::little_o_geometric) {
        d.rate = read_number(require(j, "decay_rate"), "decay_rate");
      }
      q.decay = d;
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("moments: ") + e.what());
  }
  try {
    validate(q);
  } catch (const ArgumentError& e) {
    throw SchemaError(e.what());
  }
  return q;
}

json report_to_json(const ClassificationReport& r) {
  json j;
  j["schema"] = kSchemaVersion;
  j["positive_semidefinite"] = r.positive_semidefinite;
  json evidence = json::array();
  for (const PsdEvidence& e : r.psd_evidence) {
    evidence.push_back({{"order", e.order},
                        {"shift", e.shift},
                        {"psd", e.psd},
                        {"min_eigenvalue", e.min_eigenvalue}});
  }
  j["psd_evidence"] = evidence;
  j["closable"] = r.closable;
  j["bounded"] = r.bounded;
  j["compact"] = r.compact;
  j["support_radius"] = r.support_radius;
  j["stieltjes"] = r.stieltjes;
  j["mode"] = r.mode == ClassificationMode::symbolic ? "symbolic" : "heuristic";
  j["confidence"] = r.confidence;
  j["decay_slope"] = r.decay_slope ? json(*r.decay_slope) : json(nullptr);
  j["note"] = r.note;
  return j;
}

json profile_to_json(const SpectralProfile& p) {
  json j;
  j["schema"] = kSchemaVersion;
  j["mode"] = "evidence";
  j["orders"] = p.orders;
  j["norms"] = p.norms;
  j["top_eigenvalues"] = p.top_eigenvalues;
  j["growth_fit"] = p.growth_fit;
  j["monotone"] = p.monotone;
  return j;
}

json tail_evidence_to_json(const TailEvidence& t) {
  json j;
  j["eps"] = t.eps;
  j["right_ratio"] = t.right_ratio;
  j["left_ratio"] = t.left_ratio;
  j["bounded_evidence"] = t.bounded_evidence;
  j["compact_evidence"] = t.compact_evidence;
  j["atom_at_plus_one"] = t.atom_at_plus_one;
  j["atom_at_minus_one"] = t.atom_at_minus_one;
  return j;
}

CoeffVector coeffs_from_json(const json& j) {
  check_schema(j);
  const json& g = require(j, "g");
  if (!g.is_array()) throw SchemaError("coefficients: g must be an array");
  CoeffVector c;
  for (const json& v : g) {
    if (!v.is_number()) throw SchemaError("coefficients: entries must be numbers");
    c.g.push_back(v.get<double>());
  }
  return c;
}

json coeffs_to_json(const CoeffVector& g) { return {{"schema", kSchemaVersion}, {"g", g.g}}; }

json intertwining_to_json(const IntertwiningReport& r) {
  json rows = json::array();
  for (const IntertwiningRow& row : r.rows) rows.push_back({row.lambda, row.lhs, row.rhs, row.diff});
  return rows;
}

QuadratureConfig quadrature_config_from_json(const json& j, QuadratureConfig base) {
  if (!j.is_object()) throw SchemaError("config: expected a JSON object");
  try {
    if (j.contains("base_order")) base.base_order = j.at("base_order").get<int>();
    if (j.contains("relative_tolerance")) base.relative_tolerance = j.at("relative_tolerance").get<double>();
    if (j.contains("max_subdivisions")) base.max_subdivisions = j.at("max_subdivisions").get<int>();
    if (j.contains("endpoint_refinement")) base.endpoint_refinement = j.at("endpoint_refinement").get<double>();
    base.validate();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("config: ") + e.what());
  } catch (const ArgumentError& e) {
    throw SchemaError(e.what());
  }
  return base;
}

json quadrature_config_to_json(const QuadratureConfig& cfg) {
  return {{"base_order", cfg.base_order},
          {"relative_tolerance", cfg.relative_tolerance},
          {"max_subdivisions", cfg.max_subdivisions},
          {"endpoint_refinement", cfg.endpoint_refinement}};
}

}  // namespace hankel
