#pragma once

#include <map>
#include <string>
#include <vector>

#include "robustcap/critical_periods.hpp"
#include "robustcap/feasibility.hpp"
#include "robustcap/model.hpp"
#include "robustcap/modifications.hpp"
#include "robustcap/simplex.hpp"
#include "robustcap/types.hpp"

namespace robustcap {

enum class Strategy { Mod1, Mod1Smoothed, Mod2, Mod3, Mod4, Mod6 };

std::string to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& name);  // throws InvalidParameter

struct RobustifyConfig {
  Strategy strategy = Strategy::Mod1;
  std::string reference;          ///< year id, must be in the scenario set
  int max_iterations = 20;
  double epsilon_gap_fraction = 1e-3;  ///< of annual demand
  double epsilon_hour = 1e-6;
  int smoothing_half_width = 12;
  std::size_t max_join_distance = 6;
  std::size_t splice_margin = 6;
  double alpha = 0.7;
};

struct ModificationRecord {
  int iteration = 0;
  std::string kind;
  std::string scenario;
  std::string detail;
};

struct RobustifyResult {
  SystemDesign design;
  bool converged = false;
  int iterations = 0;
  std::vector<double> cost_trajectory;        ///< TAC per iteration
  std::map<std::string, double> final_gaps;   ///< scenario -> total gap MWh
  std::vector<ModificationRecord> modification_log;
  std::string diagnostics;                    ///< filled when not converged
  ModificationState state;
  Scenario reference_data;                    ///< final, possibly synthetic
  double epsilon_gap = 0.0;                   ///< absolute threshold used
};

/// The main loop: solve the (modified) capacity-expansion problem on the
/// reference data, feasibility-test the design on every scenario, stop
/// when all gaps are within epsilon, otherwise apply the strategy's
/// modification fed by the worst scenario's gaps and repeat. Hitting the
/// iteration cap reports converged = false with diagnostics instead of
/// throwing.
RobustifyResult robustify(const RobustifyConfig& config, const std::vector<Scenario>& scenarios,
                          const TechnologyCatalog& catalog, const CostModel& cost_model,
                          const SolveOptions& opts = {});

struct SingleYearResult {
  SystemDesign design;
  double tac = 0.0;
  double objective = 0.0;
  double shed_total = 0.0;
};

/// Unmodified single-year capacity expansion.
SingleYearResult solve_single_year(const Scenario& scenario, const TechnologyCatalog& catalog,
                                   const CostModel& cost_model, const SolveOptions& opts = {});

/// Highest single-year cost: a lower bound on any robust design's cost.
double dual_bound(const std::map<std::string, double>& per_year_costs);

/// Componentwise maximum of per-year designs: feasible for every year,
/// hence its cost bounds the robust optimum from above.
SystemDesign primal_bound_design(const std::vector<SystemDesign>& designs);

struct OracleResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  SystemDesign design;
  double cost = 0.0;
};

/// The deterministic-equivalent LP: shared capacities and per-scenario
/// copies of all operational constraints, no load shedding. Refuses
/// instances above the variable budget. Throws SolverError when an
/// hour is structurally unservable.
LpProblem build_oracle(const std::vector<Scenario>& scenarios, const TechnologyCatalog& catalog,
                       const CostModel& cost_model, std::size_t max_variables = 50000);

/// Solves the deterministic equivalent; its optimum is the exact
/// robust minimum.
OracleResult oracle_monolithic(const std::vector<Scenario>& scenarios,
                               const TechnologyCatalog& catalog, const CostModel& cost_model,
                               const SolveOptions& opts = {}, std::size_t max_variables = 50000);

double annual_demand(const Scenario& scenario);

}  // namespace robustcap
