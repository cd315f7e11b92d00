#include "robustcap/feasibility.hpp"

#include <algorithm>
#include <cmath>

#include "robustcap/errors.hpp"

namespace robustcap {

double RobustnessReport::max_total_gap() const {
  double worst = 0.0;
  for (const auto& [id, series] : per_year) worst = std::max(worst, series.total);
  return worst;
}

std::string RobustnessReport::worst_scenario() const {
  std::string worst_id;
  double worst = -1.0;
  for (const auto& [id, series] : per_year) {
    if (series.total > worst) {
      worst = series.total;
      worst_id = id;
    }
  }
  return worst_id;
}

SupplyGapSeries test_feasibility(const SystemDesign& design, const Scenario& scenario,
                                 const TechnologyCatalog& catalog, const SolveOptions& opts) {
  const LpProblem lp = build_feasibility(design, scenario, catalog);
  const Solution sol = solve(lp, opts);
  if (!sol.optimal())
    throw SolverError("feasibility test for scenario " + scenario.year_id +
                      " ended with status " + to_string(sol.status));
  SupplyGapSeries series;
  series.scenario_id = scenario.year_id;
  series.gaps = tagged_values(lp, sol, "gap");
  for (double& g : series.gaps) g = std::max(g, 0.0);
  series.total = 0.0;
  for (double g : series.gaps) series.total += g;
  return series;
}

RobustnessReport is_robust(const SystemDesign& design, const std::vector<Scenario>& scenarios,
                           const TechnologyCatalog& catalog, double epsilon_gap,
                           const SolveOptions& opts) {
  if (scenarios.empty()) throw InvalidParameter("is_robust: scenario set must not be empty");
  const std::int64_t n = static_cast<std::int64_t>(scenarios.size());
  std::vector<SupplyGapSeries> results(scenarios.size());
  std::vector<std::string> errors(scenarios.size());

  // Scenario evaluations are independent; results land in per-index
  // slots, so thread scheduling cannot change the outcome.
  const bool parallel = opts.exec == ExecMode::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      results[i] = test_feasibility(design, scenarios[i], catalog, opts);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }

  RobustnessReport report;
  for (std::int64_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      report.indeterminate = true;
      report.failures.push_back(errors[i]);
    } else {
      report.per_year[results[i].scenario_id] = std::move(results[i]);
    }
  }
  report.robust = !report.indeterminate && report.max_total_gap() <= epsilon_gap;
  return report;
}

LossOfLoadSummary loss_of_load_summary(const SupplyGapSeries& gaps, const Scenario& scenario,
                                       double epsilon_hour) {
  if (gaps.gaps.size() != scenario.horizon)
    throw SchemaError("loss_of_load_summary: gap series length does not match scenario horizon");
  LossOfLoadSummary out;
  double annual_demand = 0.0;
  for (double d : scenario.demand) annual_demand += d;
  for (std::size_t t = 0; t < gaps.gaps.size(); ++t) {
    const double g = gaps.gaps[t];
    out.total_gap += g;
    if (g > epsilon_hour) ++out.gap_hours;
    if (g > out.peak_hourly_gap) out.peak_hourly_gap = g;
    if (scenario.demand[t] > 0.0)
      out.peak_fraction_of_hourly_demand =
          std::max(out.peak_fraction_of_hourly_demand, g / scenario.demand[t]);
  }
  out.fraction_of_annual_demand = annual_demand > 0.0 ? out.total_gap / annual_demand : 0.0;
  return out;
}

}  // namespace robustcap
