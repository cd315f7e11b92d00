#pragma once

#include <map>
#include <string>
#include <vector>

#include "robustcap/model.hpp"
#include "robustcap/simplex.hpp"
#include "robustcap/types.hpp"

namespace robustcap {

/// Hourly unmet demand after feasibility testing a fixed design.
struct SupplyGapSeries {
  std::string scenario_id;
  std::vector<double> gaps;  ///< MWh per hour, >= 0
  double total = 0.0;        ///< sum of gaps
};

struct LossOfLoadSummary {
  double total_gap = 0.0;                     ///< MWh
  double fraction_of_annual_demand = 0.0;
  double peak_hourly_gap = 0.0;               ///< MW
  double peak_fraction_of_hourly_demand = 0.0;
  std::size_t gap_hours = 0;
};

struct RobustnessReport {
  bool robust = false;
  bool indeterminate = false;  ///< a per-scenario solve failed
  std::map<std::string, SupplyGapSeries> per_year;
  std::vector<std::string> failures;

  double max_total_gap() const;
  /// Scenario with the largest total gap; ties break on the year id.
  std::string worst_scenario() const;
};

/// Solves the fixed-design feasibility problem for one scenario and
/// extracts the hourly supply gaps. Solver trouble is reported as a
/// SolverError carrying the scenario id.
SupplyGapSeries test_feasibility(const SystemDesign& design, const Scenario& scenario,
                                 const TechnologyCatalog& catalog,
                                 const SolveOptions& opts = {});

/// Tests the design against every scenario. The sweep runs scenarios
/// concurrently in Parallel mode; results are deterministic and
/// independent of evaluation order. Robust means every total gap is at
/// most epsilon_gap.
RobustnessReport is_robust(const SystemDesign& design, const std::vector<Scenario>& scenarios,
                           const TechnologyCatalog& catalog, double epsilon_gap,
                           const SolveOptions& opts = {});

/// Aggregates a gap series against its scenario's demand. Hours count as
/// gap hours above epsilon_hour.
LossOfLoadSummary loss_of_load_summary(const SupplyGapSeries& gaps, const Scenario& scenario,
                                       double epsilon_hour = 1e-6);

}  // namespace robustcap
