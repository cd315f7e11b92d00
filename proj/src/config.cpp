#include "robustcap/config.hpp"

#include <json.hpp>

#include "robustcap/csv_io.hpp"
#include "robustcap/errors.hpp"

namespace robustcap {

using nlohmann::json;

namespace {

double require_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw SchemaError(where + ": missing or non-numeric key '" + key + "'");
  return obj[key].get<double>();
}

double optional_number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw SchemaError("non-numeric key '" + key + "'");
  return obj[key].get<double>();
}

TechKind kind_from_string(const std::string& s, const std::string& where) {
  if (s == "supply") return TechKind::Supply;
  if (s == "storage") return TechKind::Storage;
  if (s == "conversion") return TechKind::Conversion;
  throw SchemaError(where + ": unknown kind '" + s + "'");
}

std::string kind_to_string(TechKind k) {
  switch (k) {
    case TechKind::Supply: return "supply";
    case TechKind::Storage: return "storage";
    case TechKind::Conversion: return "conversion";
  }
  return "?";
}

}  // namespace

SystemConfig parse_config(const std::string& json_text, const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(origin + ": " + e.what());
  }
  SystemConfig cfg;

  if (root.contains("cost_model")) {
    const json& cm = root["cost_model"];
    const std::string ann = cm.value("annualization", std::string("straight_line"));
    if (ann == "straight_line")
      cfg.cost_model.annualization = Annualization::StraightLine;
    else if (ann == "annuity")
      cfg.cost_model.annualization = Annualization::Annuity;
    else
      throw SchemaError(origin + ": unknown annualization '" + ann + "'");
    cfg.cost_model.discount_rate = optional_number(cm, "discount_rate", 0.0);
    cfg.cost_model.shedding_penalty_m = optional_number(cm, "shedding_penalty_m", 1e6);
  }
  cfg.cost_model.validate();

  if (root.contains("algorithm")) {
    const json& alg = root["algorithm"];
    cfg.params.epsilon_gap_fraction = optional_number(alg, "epsilon_gap_fraction", 1e-3);
    cfg.params.epsilon_hour = optional_number(alg, "epsilon_hour", 1e-6);
    cfg.params.max_iterations =
        static_cast<int>(optional_number(alg, "max_iterations", 20));
    cfg.params.smoothing_half_width =
        static_cast<int>(optional_number(alg, "smoothing_half_width", 12));
    cfg.params.max_join_distance =
        static_cast<std::size_t>(optional_number(alg, "max_join_distance", 6));
    cfg.params.splice_margin =
        static_cast<std::size_t>(optional_number(alg, "splice_margin", 6));
    cfg.params.alpha = optional_number(alg, "alpha", 0.7);
  }
  if (cfg.params.max_iterations < 1)
    throw SchemaError(origin + ": max_iterations must be >= 1");
  if (!(cfg.params.alpha > 0.0 && cfg.params.alpha <= 1.0))
    throw SchemaError(origin + ": alpha must be in (0,1]");

  if (!root.contains("technologies") || !root["technologies"].is_object() ||
      root["technologies"].empty())
    throw SchemaError(origin + ": missing 'technologies' table");
  for (const auto& [id, entry] : root["technologies"].items()) {
    const std::string where = origin + ": technology '" + id + "'";
    Technology tech;
    if (!entry.contains("kind") || !entry["kind"].is_string())
      throw SchemaError(where + ": missing 'kind'");
    tech.kind = kind_from_string(entry["kind"].get<std::string>(), where);
    tech.capex = require_number(entry, "capex", where);
    tech.opex_fix = require_number(entry, "opex_fix", where);
    tech.lifetime_years = static_cast<int>(require_number(entry, "lifetime_years", where));
    tech.max_capacity = require_number(entry, "max_capacity", where);
    tech.self_discharge_per_hour = optional_number(entry, "self_discharge_per_hour", 0.0);
    if (entry.contains("medium")) {
      const std::string medium = entry["medium"].get<std::string>();
      if (medium == "electricity")
        tech.medium = StorageMedium::Electricity;
      else if (medium == "hydrogen")
        tech.medium = StorageMedium::Hydrogen;
      else
        throw SchemaError(where + ": unknown medium '" + medium + "'");
    }
    if (entry.contains("conversion_in_eff"))
      tech.conversion_in_eff = require_number(entry, "conversion_in_eff", where);
    if (entry.contains("conversion_out_eff"))
      tech.conversion_out_eff = require_number(entry, "conversion_out_eff", where);
    try {
      cfg.catalog.add(id, tech);
    } catch (const InvalidParameter& e) {
      throw SchemaError(origin + ": " + e.what());
    }
  }
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path), path);
}

std::string config_to_json(const SystemConfig& config) {
  json root;
  root["cost_model"] = {
      {"annualization",
       config.cost_model.annualization == Annualization::StraightLine ? "straight_line"
                                                                      : "annuity"},
      {"discount_rate", config.cost_model.discount_rate},
      {"shedding_penalty_m", config.cost_model.shedding_penalty_m}};
  root["algorithm"] = {{"epsilon_gap_fraction", config.params.epsilon_gap_fraction},
                       {"epsilon_hour", config.params.epsilon_hour},
                       {"max_iterations", config.params.max_iterations},
                       {"smoothing_half_width", config.params.smoothing_half_width},
                       {"max_join_distance", config.params.max_join_distance},
                       {"splice_margin", config.params.splice_margin},
                       {"alpha", config.params.alpha}};
  json techs = json::object();
  for (const auto& [id, t] : config.catalog.entries()) {
    json entry = {{"kind", kind_to_string(t.kind)},
                 {"capex", t.capex},
                 {"opex_fix", t.opex_fix},
                 {"lifetime_years", t.lifetime_years},
                 {"max_capacity", t.max_capacity}};
    if (t.self_discharge_per_hour != 0.0)
      entry["self_discharge_per_hour"] = t.self_discharge_per_hour;
    if (t.medium)
      entry["medium"] = *t.medium == StorageMedium::Electricity ? "electricity" : "hydrogen";
    if (t.conversion_in_eff) entry["conversion_in_eff"] = *t.conversion_in_eff;
    if (t.conversion_out_eff) entry["conversion_out_eff"] = *t.conversion_out_eff;
    techs[id] = entry;
  }
  root["technologies"] = techs;
  return root.dump(2) + "\n";
}

}  // namespace robustcap
