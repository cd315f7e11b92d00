#pragma once

#include <map>
#include <string>
#include <vector>

#include "robustcap/lp.hpp"
#include "robustcap/modifications.hpp"
#include "robustcap/simplex.hpp"
#include "robustcap/types.hpp"

namespace robustcap {

/// Annuity factor r(1+r)^L / ((1+r)^L - 1); the r = 0 limit is 1/L.
double annuity_factor(double rate, int years);

/// Annualized cost of one capacity unit per year. Straight-line:
/// capex/lifetime + opex_fix. Annuity: capex * annuity_factor + opex_fix.
double annualize_cost(const Technology& tech, const CostModel& cost_model);

/// Sum of annualized capacity costs of the design.
double total_annual_cost(const SystemDesign& design, const TechnologyCatalog& catalog,
                         const CostModel& cost_model);

/// Per-technology contribution to the total annual cost.
std::map<std::string, double> cost_breakdown(const SystemDesign& design,
                                             const TechnologyCatalog& catalog,
                                             const CostModel& cost_model);

/// Full-load deliverable power at the given hour: weather-scaled supply
/// plus the H2 turbine's electric output at full load.
double potential_supply(const SystemDesign& design, const Scenario& scenario,
                        const TechnologyCatalog& catalog, std::size_t hour);

/// Builds the capacity-expansion LP: capacity variables, hourly storage
/// levels for both media, conversion flows, load shedding, the hourly
/// energy balance, hydrogen dynamics, capacity couplings, cyclic storage
/// closure, and every extra constraint registered in the modification
/// state. Demand is the scenario's series plus the state's additions.
LpProblem build_capex(const Scenario& scenario, const TechnologyCatalog& catalog,
                      const CostModel& cost_model, const ModificationState& mods);

/// Builds the fixed-design feasibility LP: the same operational skeleton
/// with capacities folded into bounds and a nonnegative supply-gap
/// variable on each hourly balance row; the objective is the gap total.
LpProblem build_feasibility(const SystemDesign& design, const Scenario& scenario,
                            const TechnologyCatalog& catalog);

/// Reads the capacity variables out of a solved capacity-expansion LP.
SystemDesign design_from_solution(const LpProblem& problem, const Solution& solution,
                                  const TechnologyCatalog& catalog, const std::string& source);

/// Values of one tagged variable group, in layout order.
std::vector<double> tagged_values(const LpProblem& problem, const Solution& solution,
                                  const std::string& tag);

}  // namespace robustcap
