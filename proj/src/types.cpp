#include "robustcap/types.hpp"

#include <cmath>

#include "robustcap/errors.hpp"

namespace robustcap {

void TechnologyCatalog::add(const std::string& id, const Technology& tech) {
  if (id.empty()) throw InvalidParameter("technology id must not be empty");
  if (entries_.count(id)) throw InvalidParameter("duplicate technology id: " + id);
  if (tech.capex < 0) throw InvalidParameter(id + ": capex must be >= 0");
  if (tech.opex_fix < 0) throw InvalidParameter(id + ": opex_fix must be >= 0");
  if (tech.lifetime_years < 1) throw InvalidParameter(id + ": lifetime_years must be >= 1");
  if (tech.max_capacity < 0) throw InvalidParameter(id + ": max_capacity must be >= 0");
  if (tech.self_discharge_per_hour < 0 || tech.self_discharge_per_hour >= 1)
    throw InvalidParameter(id + ": self_discharge_per_hour must be in [0,1)");
  if (tech.kind == TechKind::Storage && !tech.medium)
    throw InvalidParameter(id + ": storage technology needs a medium");
  if (tech.kind != TechKind::Storage && tech.medium)
    throw InvalidParameter(id + ": medium only applies to storage");
  if (tech.kind == TechKind::Conversion) {
    const bool in = tech.conversion_in_eff.has_value();
    const bool out = tech.conversion_out_eff.has_value();
    if (in == out)
      throw InvalidParameter(id + ": conversion needs exactly one of in/out efficiency");
    const double eff = in ? *tech.conversion_in_eff : *tech.conversion_out_eff;
    if (!(eff > 0.0 && eff <= 1.0))
      throw InvalidParameter(id + ": conversion efficiency must be in (0,1]");
  } else if (tech.conversion_in_eff || tech.conversion_out_eff) {
    throw InvalidParameter(id + ": conversion efficiencies only apply to conversion kind");
  }
  // The single-node model tracks one storage per medium and one conversion
  // per direction; reject a second entry for the same role up front.
  if (tech.kind == TechKind::Storage && storage_id(*tech.medium))
    throw InvalidParameter(id + ": a storage technology for this medium already exists");
  if (tech.kind == TechKind::Conversion) {
    if (tech.conversion_in_eff && charger_id())
      throw InvalidParameter(id + ": an electricity->H2 conversion already exists");
    if (tech.conversion_out_eff && discharger_id())
      throw InvalidParameter(id + ": an H2->electricity conversion already exists");
  }
  entries_.emplace(id, tech);
}

const Technology& TechnologyCatalog::at(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw InvalidParameter("unknown technology: " + id);
  return it->second;
}

std::vector<std::string> TechnologyCatalog::supply_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, t] : entries_)
    if (t.kind == TechKind::Supply) out.push_back(id);
  return out;
}

std::optional<std::string> TechnologyCatalog::storage_id(StorageMedium medium) const {
  for (const auto& [id, t] : entries_)
    if (t.kind == TechKind::Storage && t.medium == medium) return id;
  return std::nullopt;
}

std::optional<std::string> TechnologyCatalog::charger_id() const {
  for (const auto& [id, t] : entries_)
    if (t.kind == TechKind::Conversion && t.conversion_in_eff) return id;
  return std::nullopt;
}

std::optional<std::string> TechnologyCatalog::discharger_id() const {
  for (const auto& [id, t] : entries_)
    if (t.kind == TechKind::Conversion && t.conversion_out_eff) return id;
  return std::nullopt;
}

void Scenario::validate(const TechnologyCatalog& catalog) const {
  if (horizon == 0) throw SchemaError(year_id + ": horizon must be positive");
  if (demand.size() != horizon)
    throw SchemaError(year_id + ": demand has " + std::to_string(demand.size()) +
                      " entries, expected " + std::to_string(horizon));
  for (std::size_t t = 0; t < demand.size(); ++t) {
    if (!std::isfinite(demand[t]) || demand[t] < 0)
      throw SchemaError(year_id + ": demand at hour " + std::to_string(t) + " must be >= 0");
  }
  for (const auto& id : catalog.supply_ids()) {
    auto it = capacity_factors.find(id);
    if (it == capacity_factors.end())
      throw SchemaError(year_id + ": missing capacity-factor series for " + id);
    if (it->second.size() != horizon)
      throw SchemaError(year_id + ": capacity factors for " + id + " have " +
                        std::to_string(it->second.size()) + " entries, expected " +
                        std::to_string(horizon));
  }
  for (const auto& [id, series] : capacity_factors) {
    if (!catalog.has(id) || catalog.at(id).kind != TechKind::Supply)
      throw SchemaError(year_id + ": capacity factors given for non-supply technology " + id);
    for (std::size_t t = 0; t < series.size(); ++t) {
      const double v = series[t];
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw SchemaError(year_id + ": capacity factor for " + id + " at hour " +
                          std::to_string(t) + " outside [0,1]");
    }
  }
}

void SystemDesign::validate(const TechnologyCatalog& catalog) const {
  for (const auto& [id, tech] : catalog.entries()) {
    auto it = capacities.find(id);
    if (it == capacities.end())
      throw InvalidDesign("design is missing capacity for " + id);
    const double x = it->second;
    if (!std::isfinite(x) || x < -1e-9)
      throw InvalidDesign("design capacity for " + id + " must be >= 0");
    if (x > tech.max_capacity * (1.0 + 1e-9) + 1e-9)
      throw InvalidDesign("design capacity for " + id + " exceeds max_capacity");
  }
  for (const auto& [id, x] : capacities) {
    if (!catalog.has(id)) throw InvalidDesign("design names unknown technology " + id);
  }
}

void CostModel::validate() const {
  if (discount_rate < 0.0 || discount_rate >= 1.0)
    throw InvalidParameter("discount_rate must be in [0,1)");
  if (shedding_penalty_m <= 0.0)
    throw InvalidParameter("shedding_penalty_m must be positive");
}

}  // namespace robustcap
