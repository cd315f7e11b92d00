#include "robustcap/model.hpp"

#include <algorithm>
#include <cmath>

#include "robustcap/errors.hpp"

namespace robustcap {

double annuity_factor(double rate, int years) {
  if (years < 1) throw InvalidParameter("annuity_factor: lifetime must be >= 1 year");
  if (rate < 0.0 || rate >= 1.0) throw InvalidParameter("annuity_factor: rate must be in [0,1)");
  if (rate == 0.0) return 1.0 / static_cast<double>(years);
  const double q = std::pow(1.0 + rate, years);
  return rate * q / (q - 1.0);
}

double annualize_cost(const Technology& tech, const CostModel& cost_model) {
  if (tech.lifetime_years < 1)
    throw InvalidParameter("annualize_cost: lifetime must be >= 1 year");
  switch (cost_model.annualization) {
    case Annualization::StraightLine:
      return tech.capex / static_cast<double>(tech.lifetime_years) + tech.opex_fix;
    case Annualization::Annuity:
      return tech.capex * annuity_factor(cost_model.discount_rate, tech.lifetime_years) +
             tech.opex_fix;
  }
  throw InvalidParameter("annualize_cost: unknown annualization");
}

double total_annual_cost(const SystemDesign& design, const TechnologyCatalog& catalog,
                         const CostModel& cost_model) {
  design.validate(catalog);
  double total = 0.0;
  for (const auto& [id, tech] : catalog.entries())
    total += annualize_cost(tech, cost_model) * design.capacities.at(id);
  return total;
}

std::map<std::string, double> cost_breakdown(const SystemDesign& design,
                                             const TechnologyCatalog& catalog,
                                             const CostModel& cost_model) {
  design.validate(catalog);
  std::map<std::string, double> out;
  for (const auto& [id, tech] : catalog.entries())
    out[id] = annualize_cost(tech, cost_model) * design.capacities.at(id);
  return out;
}

double potential_supply(const SystemDesign& design, const Scenario& scenario,
                        const TechnologyCatalog& catalog, std::size_t hour) {
  if (hour >= scenario.horizon)
    throw InvalidParameter("potential_supply: hour " + std::to_string(hour) +
                           " outside horizon " + std::to_string(scenario.horizon));
  double sum = 0.0;
  for (const auto& id : catalog.supply_ids()) {
    auto it = design.capacities.find(id);
    const double x = it == design.capacities.end() ? 0.0 : it->second;
    sum += scenario.capacity_factors.at(id)[hour] * x;
  }
  if (auto gt = catalog.discharger_id()) {
    auto it = design.capacities.find(*gt);
    const double x = it == design.capacities.end() ? 0.0 : it->second;
    sum += *catalog.at(*gt).conversion_out_eff * x;
  }
  return sum;
}

namespace {

struct Roles {
  std::vector<std::string> supply;
  std::optional<std::string> battery;
  std::optional<std::string> cavern;
  std::optional<std::string> electrolyser;
  std::optional<std::string> turbine;
};

Roles analyze_roles(const TechnologyCatalog& catalog) {
  Roles roles;
  roles.supply = catalog.supply_ids();
  roles.battery = catalog.storage_id(StorageMedium::Electricity);
  roles.cavern = catalog.storage_id(StorageMedium::Hydrogen);
  roles.electrolyser = catalog.charger_id();
  roles.turbine = catalog.discharger_id();
  if ((roles.electrolyser || roles.turbine) && !roles.cavern)
    throw SchemaError("H2 conversion technologies require a hydrogen storage technology");
  return roles;
}

std::vector<double> effective_demand(const Scenario& scenario, const ModificationState& mods) {
  std::vector<double> d = scenario.demand;
  if (!mods.demand_additions.empty()) {
    if (mods.demand_additions.size() != d.size())
      throw SchemaError("demand additions length does not match scenario horizon");
    for (std::size_t t = 0; t < d.size(); ++t) d[t] += mods.demand_additions[t];
  }
  return d;
}

void append_extra_constraints(LpProblem& lp, const ModificationState& mods,
                              const TechnologyCatalog& catalog, bool has_cavern) {
  for (const auto& extra : mods.extra_constraints) {
    std::vector<LpTerm> terms;
    for (const auto& [tech, coef] : extra.capacity_terms) {
      if (coef == 0.0) continue;
      const int idx = lp.named_var("x_" + tech);
      if (idx < 0 || !catalog.has(tech))
        throw ModificationError("constraint " + extra.name + " references unknown technology " +
                                tech);
      terms.push_back({idx, coef});
    }
    for (const auto& [key, coef] : extra.sigma_terms) {
      if (coef == 0.0) continue;
      const int idx = lp.named_var("sigma_" + key);
      if (idx < 0)
        throw ModificationError("constraint " + extra.name + " references unknown sigma " + key);
      terms.push_back({idx, coef});
    }
    if (extra.h2_initial_coef != 0.0) {
      if (!has_cavern)
        throw ModificationError("constraint " + extra.name +
                                " references H2 storage, but none exists");
      terms.push_back({lp.named_var("sh2_0"), extra.h2_initial_coef});
    }
    if (terms.empty())
      throw ModificationError("constraint " + extra.name + " has no resolvable terms");
    lp.add_row(extra.name, std::move(terms), extra.sense, extra.rhs);
  }
}

}  // namespace

LpProblem build_capex(const Scenario& scenario, const TechnologyCatalog& catalog,
                      const CostModel& cost_model, const ModificationState& mods) {
  scenario.validate(catalog);
  cost_model.validate();
  // Shedding must never beat building: the penalty has to clear the
  // steepest per-unit cost a technology can impose per delivered MWh.
  double steepest = 0.0;
  for (const auto& [id, tech] : catalog.entries())
    steepest = std::max(steepest, annualize_cost(tech, cost_model));
  if (cost_model.shedding_penalty_m <= steepest)
    throw InvalidParameter("shedding_penalty_m must exceed the highest annualized unit cost");
  if (!(mods.alpha > 0.0 && mods.alpha <= 1.0))
    throw InvalidParameter("modification alpha must be in (0,1]");
  const Roles roles = analyze_roles(catalog);
  const std::size_t H = scenario.horizon;
  const std::vector<double> dem = effective_demand(scenario, mods);

  LpProblem lp;

  for (const auto& [id, tech] : catalog.entries())
    lp.add_var("x_" + id, 0.0, tech.max_capacity, annualize_cost(tech, cost_model), "x");
  if (roles.battery)
    for (std::size_t t = 0; t < H; ++t) lp.add_var("sel_" + std::to_string(t), 0.0, kInf, 0.0, "storage_el");
  if (roles.cavern)
    for (std::size_t k = 0; k <= H; ++k) lp.add_var("sh2_" + std::to_string(k), 0.0, kInf, 0.0, "storage_h2");
  if (roles.electrolyser)
    for (std::size_t t = 0; t < H; ++t) lp.add_var("cin_" + std::to_string(t), 0.0, kInf, 0.0, "conv_in");
  if (roles.turbine)
    for (std::size_t t = 0; t < H; ++t) lp.add_var("cout_" + std::to_string(t), 0.0, kInf, 0.0, "conv_out");
  for (std::size_t t = 0; t < H; ++t)
    lp.add_var("shed_" + std::to_string(t), 0.0, dem[t], cost_model.shedding_penalty_m, "shed");
  for (const auto& sv : mods.sigma_vars) lp.add_var("sigma_" + sv.key, 0.0, kInf, 0.0, "sigma");

  const double keep_el =
      roles.battery ? 1.0 - catalog.at(*roles.battery).self_discharge_per_hour : 1.0;
  const double keep_h2 =
      roles.cavern ? 1.0 - catalog.at(*roles.cavern).self_discharge_per_hour : 1.0;
  const double eff_in =
      roles.electrolyser ? *catalog.at(*roles.electrolyser).conversion_in_eff : 0.0;
  const double eff_out = roles.turbine ? *catalog.at(*roles.turbine).conversion_out_eff : 0.0;

  // Hourly energy balance. The electric storage level wraps around the
  // horizon, which enforces its cyclic closure structurally.
  for (std::size_t t = 0; t < H; ++t) {
    std::vector<LpTerm> terms;
    for (const auto& id : roles.supply) {
      const double a = scenario.capacity_factors.at(id)[t];
      if (a != 0.0) terms.push_back({lp.named_var("x_" + id), a});
    }
    if (roles.turbine) terms.push_back({lp.named_var("cout_" + std::to_string(t)), 1.0});
    if (roles.electrolyser) terms.push_back({lp.named_var("cin_" + std::to_string(t)), -1.0});
    if (roles.battery) {
      const std::size_t prev = (t + H - 1) % H;
      terms.push_back({lp.named_var("sel_" + std::to_string(prev)), keep_el});
      terms.push_back({lp.named_var("sel_" + std::to_string(t)), -1.0});
    }
    terms.push_back({lp.named_var("shed_" + std::to_string(t)), 1.0});
    lp.add_row("balance_" + std::to_string(t), std::move(terms), Sense::Ge, dem[t]);
  }

  // Hydrogen stock dynamics and closure.
  if (roles.cavern) {
    for (std::size_t t = 0; t < H; ++t) {
      std::vector<LpTerm> terms;
      terms.push_back({lp.named_var("sh2_" + std::to_string(t + 1)), 1.0});
      terms.push_back({lp.named_var("sh2_" + std::to_string(t)), -keep_h2});
      if (roles.electrolyser)
        terms.push_back({lp.named_var("cin_" + std::to_string(t)), -eff_in});
      if (roles.turbine)
        terms.push_back({lp.named_var("cout_" + std::to_string(t)), 1.0 / eff_out});
      lp.add_row("h2dyn_" + std::to_string(t), std::move(terms), Sense::Eq, 0.0);
    }
    std::vector<LpTerm> closure{{lp.named_var("sh2_" + std::to_string(H)), 1.0},
                                {lp.named_var("sh2_0"), -1.0}};
    if (mods.h2_end_bonus > 0.0)
      lp.add_row("h2_closure", std::move(closure), Sense::Ge, mods.h2_end_bonus);
    else
      lp.add_row("h2_closure", std::move(closure), Sense::Eq, 0.0);
  }

  // Couplings between operational levels and built capacity.
  if (roles.battery) {
    const int xb = lp.named_var("x_" + *roles.battery);
    for (std::size_t t = 0; t < H; ++t)
      lp.add_row("elcap_" + std::to_string(t),
                 {{lp.named_var("sel_" + std::to_string(t)), 1.0}, {xb, -1.0}}, Sense::Le, 0.0);
  }
  if (roles.cavern) {
    const int xc = lp.named_var("x_" + *roles.cavern);
    for (std::size_t k = 0; k <= H; ++k)
      lp.add_row("h2cap_" + std::to_string(k),
                 {{lp.named_var("sh2_" + std::to_string(k)), 1.0}, {xc, -1.0}}, Sense::Le, 0.0);
  }
  if (roles.electrolyser) {
    const int xe = lp.named_var("x_" + *roles.electrolyser);
    for (std::size_t t = 0; t < H; ++t)
      lp.add_row("cincap_" + std::to_string(t),
                 {{lp.named_var("cin_" + std::to_string(t)), 1.0}, {xe, -1.0}}, Sense::Le, 0.0);
  }
  if (roles.turbine) {
    const int xg = lp.named_var("x_" + *roles.turbine);
    for (std::size_t t = 0; t < H; ++t)
      lp.add_row("coutcap_" + std::to_string(t),
                 {{lp.named_var("cout_" + std::to_string(t)), 1.0}, {xg, -eff_out}}, Sense::Le,
                 0.0);
  }

  append_extra_constraints(lp, mods, catalog, roles.cavern.has_value());
  lp.validate();
  return lp;
}

LpProblem build_feasibility(const SystemDesign& design, const Scenario& scenario,
                            const TechnologyCatalog& catalog) {
  design.validate(catalog);
  scenario.validate(catalog);
  const Roles roles = analyze_roles(catalog);
  const std::size_t H = scenario.horizon;

  const double cap_bat = roles.battery ? design.capacities.at(*roles.battery) : 0.0;
  const double cap_cav = roles.cavern ? design.capacities.at(*roles.cavern) : 0.0;
  const double cap_elz = roles.electrolyser ? design.capacities.at(*roles.electrolyser) : 0.0;
  const double eff_in =
      roles.electrolyser ? *catalog.at(*roles.electrolyser).conversion_in_eff : 0.0;
  const double eff_out = roles.turbine ? *catalog.at(*roles.turbine).conversion_out_eff : 0.0;
  const double cap_out = roles.turbine ? eff_out * design.capacities.at(*roles.turbine) : 0.0;
  const double keep_el =
      roles.battery ? 1.0 - catalog.at(*roles.battery).self_discharge_per_hour : 1.0;
  const double keep_h2 =
      roles.cavern ? 1.0 - catalog.at(*roles.cavern).self_discharge_per_hour : 1.0;

  LpProblem lp;
  if (roles.battery)
    for (std::size_t t = 0; t < H; ++t)
      lp.add_var("sel_" + std::to_string(t), 0.0, cap_bat, 0.0, "storage_el");
  if (roles.cavern)
    for (std::size_t k = 0; k <= H; ++k)
      lp.add_var("sh2_" + std::to_string(k), 0.0, cap_cav, 0.0, "storage_h2");
  if (roles.electrolyser)
    for (std::size_t t = 0; t < H; ++t)
      lp.add_var("cin_" + std::to_string(t), 0.0, cap_elz, 0.0, "conv_in");
  if (roles.turbine)
    for (std::size_t t = 0; t < H; ++t)
      lp.add_var("cout_" + std::to_string(t), 0.0, cap_out, 0.0, "conv_out");
  for (std::size_t t = 0; t < H; ++t)
    lp.add_var("gap_" + std::to_string(t), 0.0, kInf, 1.0, "gap");

  for (std::size_t t = 0; t < H; ++t) {
    double pot = 0.0;
    for (const auto& id : roles.supply) {
      auto it = design.capacities.find(id);
      const double x = it == design.capacities.end() ? 0.0 : it->second;
      pot += scenario.capacity_factors.at(id)[t] * x;
    }
    std::vector<LpTerm> terms;
    if (roles.turbine) terms.push_back({lp.named_var("cout_" + std::to_string(t)), 1.0});
    if (roles.electrolyser) terms.push_back({lp.named_var("cin_" + std::to_string(t)), -1.0});
    if (roles.battery) {
      const std::size_t prev = (t + H - 1) % H;
      terms.push_back({lp.named_var("sel_" + std::to_string(prev)), keep_el});
      terms.push_back({lp.named_var("sel_" + std::to_string(t)), -1.0});
    }
    terms.push_back({lp.named_var("gap_" + std::to_string(t)), 1.0});
    lp.add_row("balance_" + std::to_string(t), std::move(terms), Sense::Ge,
               scenario.demand[t] - pot);
  }

  if (roles.cavern) {
    for (std::size_t t = 0; t < H; ++t) {
      std::vector<LpTerm> terms;
      terms.push_back({lp.named_var("sh2_" + std::to_string(t + 1)), 1.0});
      terms.push_back({lp.named_var("sh2_" + std::to_string(t)), -keep_h2});
      if (roles.electrolyser)
        terms.push_back({lp.named_var("cin_" + std::to_string(t)), -eff_in});
      if (roles.turbine)
        terms.push_back({lp.named_var("cout_" + std::to_string(t)), 1.0 / eff_out});
      lp.add_row("h2dyn_" + std::to_string(t), std::move(terms), Sense::Eq, 0.0);
    }
    // Year-end stock must not fall below the free starting level.
    lp.add_row("h2_closure",
               {{lp.named_var("sh2_" + std::to_string(H)), 1.0}, {lp.named_var("sh2_0"), -1.0}},
               Sense::Ge, 0.0);
  }

  lp.validate();
  return lp;
}

SystemDesign design_from_solution(const LpProblem& problem, const Solution& solution,
                                  const TechnologyCatalog& catalog, const std::string& source) {
  if (!solution.optimal()) throw SolverError("design_from_solution: solution is not optimal");
  SystemDesign design;
  design.source = source;
  for (const auto& [id, tech] : catalog.entries()) {
    const int idx = problem.named_var("x_" + id);
    if (idx < 0) throw SolverError("design_from_solution: missing variable for " + id);
    double x = solution.values[idx];
    x = std::clamp(x, 0.0, tech.max_capacity);
    design.capacities[id] = x;
  }
  return design;
}

std::vector<double> tagged_values(const LpProblem& problem, const Solution& solution,
                                  const std::string& tag) {
  std::vector<double> out;
  for (int idx : problem.tagged(tag)) out.push_back(solution.values[idx]);
  return out;
}

}  // namespace robustcap
