#include "robustcap/robustify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "robustcap/errors.hpp"

namespace robustcap {

namespace {

std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const Scenario& scenario_by_id(const std::vector<Scenario>& scenarios, const std::string& id) {
  for (const auto& s : scenarios)
    if (s.year_id == id) return s;
  throw InvalidParameter("unknown scenario: " + id);
}

void check_shared_series(const std::vector<Scenario>& scenarios) {
  for (std::size_t i = 1; i < scenarios.size(); ++i) {
    if (scenarios[i].horizon != scenarios[0].horizon)
      throw SchemaError("scenarios must share one horizon (" + scenarios[i].year_id + " differs)");
    if (scenarios[i].demand != scenarios[0].demand)
      throw SchemaError("scenarios must share one demand series (" + scenarios[i].year_id +
                        " differs)");
  }
}

double hourly_factor_sum(const Scenario& scenario, std::size_t t) {
  double sum = 0.0;
  for (const auto& [id, series] : scenario.capacity_factors) sum += series[t];
  return sum;
}

// Pads a clustered period by up to `margin` hours on each side, but only
// across hours where the donor is no better than the current reference
// data. Padding into donor-favourable hours would overwrite the
// reference's own difficulty and lose it for good, since later splices
// may not overwrite earlier ones.
HourRange padded_towards_donor(const HourRange& hours, std::size_t margin,
                               const Scenario& reference, const Scenario& donor) {
  HourRange out = hours;
  for (std::size_t k = 0; k < margin && out.start > 0; ++k) {
    const std::size_t t = out.start - 1;
    if (hourly_factor_sum(donor, t) > hourly_factor_sum(reference, t) + 1e-12) break;
    out.start = t;
  }
  for (std::size_t k = 0; k < margin && out.end + 1 < donor.horizon; ++k) {
    const std::size_t t = out.end + 1;
    if (hourly_factor_sum(donor, t) > hourly_factor_sum(reference, t) + 1e-12) break;
    out.end = t;
  }
  return out;
}

// Contiguous runs of hours where the donor's data is strictly worse
// than the current reference data. With storage in the model, a supply
// gap can surface far away from the hours that caused it, so gap
// clusters alone do not name every period worth splicing; these runs
// feed the full-load-hour stage of the period ranking.
std::vector<HourRange> donor_worse_runs(const Scenario& reference, const Scenario& donor,
                                        std::size_t join_distance) {
  std::vector<HourRange> runs;
  bool open = false;
  HourRange current{0, 0};
  for (std::size_t t = 0; t < donor.horizon; ++t) {
    const bool worse =
        hourly_factor_sum(donor, t) < hourly_factor_sum(reference, t) - 1e-9;
    if (worse) {
      if (open && t - current.end <= join_distance) {
        current.end = t;
      } else {
        if (open) runs.push_back(current);
        current = {t, t};
        open = true;
      }
    }
  }
  if (open) runs.push_back(current);
  return runs;
}

// The parts of `hours` not yet covered by existing splices. Residual
// gaps often sit just inside an earlier splice because the donor's bad
// spell reaches past the clustered block; splicing only the free
// remainder keeps the loop progressing without overwriting.
std::vector<HourRange> unspliced_parts(const HourRange& hours,
                                       const std::vector<SplicedPeriod>& existing) {
  std::vector<HourRange> covered;
  for (const auto& s : existing)
    if (s.hours.overlaps(hours)) covered.push_back(s.hours);
  std::sort(covered.begin(), covered.end(),
            [](const HourRange& a, const HourRange& b) { return a.start < b.start; });
  std::vector<HourRange> free;
  std::size_t cursor = hours.start;
  for (const auto& c : covered) {
    if (c.start > cursor) free.push_back({cursor, std::min(c.start - 1, hours.end)});
    cursor = std::max(cursor, c.end + 1);
    if (cursor > hours.end) break;
  }
  if (cursor <= hours.end) free.push_back({cursor, hours.end});
  return free;
}

}  // namespace

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Mod1: return "mod1";
    case Strategy::Mod1Smoothed: return "mod1_smoothed";
    case Strategy::Mod2: return "mod2";
    case Strategy::Mod3: return "mod3";
    case Strategy::Mod4: return "mod4";
    case Strategy::Mod6: return "mod6";
  }
  return "unknown";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "mod1") return Strategy::Mod1;
  if (name == "mod1s" || name == "mod1_smoothed") return Strategy::Mod1Smoothed;
  if (name == "mod2") return Strategy::Mod2;
  if (name == "mod3") return Strategy::Mod3;
  if (name == "mod4") return Strategy::Mod4;
  if (name == "mod6") return Strategy::Mod6;
  throw InvalidParameter("unknown strategy: " + name);
}

double annual_demand(const Scenario& scenario) {
  double sum = 0.0;
  for (double d : scenario.demand) sum += d;
  return sum;
}

SingleYearResult solve_single_year(const Scenario& scenario, const TechnologyCatalog& catalog,
                                   const CostModel& cost_model, const SolveOptions& opts) {
  const LpProblem lp = build_capex(scenario, catalog, cost_model, ModificationState{});
  const Solution sol = solve(lp, opts);
  if (!sol.optimal())
    throw SolverError("single-year optimisation for " + scenario.year_id +
                      " ended with status " + to_string(sol.status));
  SingleYearResult out;
  out.design = design_from_solution(lp, sol, catalog, scenario.year_id);
  out.tac = total_annual_cost(out.design, catalog, cost_model);
  out.objective = sol.objective;
  for (double s : tagged_values(lp, sol, "shed")) out.shed_total += s;
  return out;
}

double dual_bound(const std::map<std::string, double>& per_year_costs) {
  if (per_year_costs.empty()) throw InvalidParameter("dual_bound: empty cost map");
  double best = -kInf;
  for (const auto& [id, cost] : per_year_costs) best = std::max(best, cost);
  return best;
}

SystemDesign primal_bound_design(const std::vector<SystemDesign>& designs) {
  if (designs.empty()) throw InvalidParameter("primal_bound_design: empty design set");
  SystemDesign out = designs[0];
  out.source = "primal_bound";
  for (std::size_t i = 1; i < designs.size(); ++i) {
    if (designs[i].capacities.size() != out.capacities.size())
      throw InvalidParameter("primal_bound_design: designs disagree on the technology set");
    for (auto& [id, cap] : out.capacities) {
      auto it = designs[i].capacities.find(id);
      if (it == designs[i].capacities.end())
        throw InvalidParameter("primal_bound_design: designs disagree on the technology set");
      cap = std::max(cap, it->second);
    }
  }
  return out;
}

LpProblem build_oracle(const std::vector<Scenario>& scenarios, const TechnologyCatalog& catalog,
                       const CostModel& cost_model, std::size_t max_variables) {
  if (scenarios.empty()) throw InvalidParameter("oracle: scenario set must not be empty");
  check_shared_series(scenarios);
  cost_model.validate();
  for (const auto& s : scenarios) s.validate(catalog);

  const std::size_t H = scenarios[0].horizon;
  const auto battery = catalog.storage_id(StorageMedium::Electricity);
  const auto cavern = catalog.storage_id(StorageMedium::Hydrogen);
  const auto electrolyser = catalog.charger_id();
  const auto turbine = catalog.discharger_id();
  if ((electrolyser || turbine) && !cavern)
    throw SchemaError("H2 conversion technologies require a hydrogen storage technology");

  std::size_t per_scenario = 0;
  if (battery) per_scenario += H;
  if (cavern) per_scenario += H + 1;
  if (electrolyser) per_scenario += H;
  if (turbine) per_scenario += H;
  const std::size_t total_vars = catalog.size() + scenarios.size() * per_scenario;
  if (total_vars > max_variables)
    throw InvalidParameter("oracle: instance needs " + std::to_string(total_vars) +
                           " variables, above the budget of " + std::to_string(max_variables));

  LpProblem lp;
  for (const auto& [id, tech] : catalog.entries())
    lp.add_var("x_" + id, 0.0, tech.max_capacity, annualize_cost(tech, cost_model), "x");

  const double keep_el = battery ? 1.0 - catalog.at(*battery).self_discharge_per_hour : 1.0;
  const double keep_h2 = cavern ? 1.0 - catalog.at(*cavern).self_discharge_per_hour : 1.0;
  const double eff_in = electrolyser ? *catalog.at(*electrolyser).conversion_in_eff : 0.0;
  const double eff_out = turbine ? *catalog.at(*turbine).conversion_out_eff : 0.0;

  for (const auto& scen : scenarios) {
    const std::string& y = scen.year_id;
    const std::string tag = "op:" + y;
    if (battery)
      for (std::size_t t = 0; t < H; ++t)
        lp.add_var(y + "/sel_" + std::to_string(t), 0.0, kInf, 0.0, tag);
    if (cavern)
      for (std::size_t k = 0; k <= H; ++k)
        lp.add_var(y + "/sh2_" + std::to_string(k), 0.0, kInf, 0.0, tag);
    if (electrolyser)
      for (std::size_t t = 0; t < H; ++t)
        lp.add_var(y + "/cin_" + std::to_string(t), 0.0, kInf, 0.0, tag);
    if (turbine)
      for (std::size_t t = 0; t < H; ++t)
        lp.add_var(y + "/cout_" + std::to_string(t), 0.0, kInf, 0.0, tag);

    for (std::size_t t = 0; t < H; ++t) {
      std::vector<LpTerm> terms;
      for (const auto& id : catalog.supply_ids()) {
        const double a = scen.capacity_factors.at(id)[t];
        if (a != 0.0) terms.push_back({lp.named_var("x_" + id), a});
      }
      if (turbine) terms.push_back({lp.named_var(y + "/cout_" + std::to_string(t)), 1.0});
      if (electrolyser) terms.push_back({lp.named_var(y + "/cin_" + std::to_string(t)), -1.0});
      if (battery) {
        const std::size_t prev = (t + H - 1) % H;
        terms.push_back({lp.named_var(y + "/sel_" + std::to_string(prev)), keep_el});
        terms.push_back({lp.named_var(y + "/sel_" + std::to_string(t)), -1.0});
      }
      if (terms.empty()) {
        if (scen.demand[t] > 0.0)
          throw SolverError("oracle: hour " + std::to_string(t) + " of scenario " + y +
                            " cannot be served by any technology");
        continue;
      }
      lp.add_row(y + "/balance_" + std::to_string(t), std::move(terms), Sense::Ge,
                 scen.demand[t]);
    }
    if (cavern) {
      for (std::size_t t = 0; t < H; ++t) {
        std::vector<LpTerm> terms;
        terms.push_back({lp.named_var(y + "/sh2_" + std::to_string(t + 1)), 1.0});
        terms.push_back({lp.named_var(y + "/sh2_" + std::to_string(t)), -keep_h2});
        if (electrolyser)
          terms.push_back({lp.named_var(y + "/cin_" + std::to_string(t)), -eff_in});
        if (turbine)
          terms.push_back({lp.named_var(y + "/cout_" + std::to_string(t)), 1.0 / eff_out});
        lp.add_row(y + "/h2dyn_" + std::to_string(t), std::move(terms), Sense::Eq, 0.0);
      }
      lp.add_row(y + "/h2_closure",
                 {{lp.named_var(y + "/sh2_" + std::to_string(H)), 1.0},
                  {lp.named_var(y + "/sh2_0"), -1.0}},
                 Sense::Ge, 0.0);
    }
    if (battery) {
      const int xb = lp.named_var("x_" + *battery);
      for (std::size_t t = 0; t < H; ++t)
        lp.add_row(y + "/elcap_" + std::to_string(t),
                   {{lp.named_var(y + "/sel_" + std::to_string(t)), 1.0}, {xb, -1.0}}, Sense::Le,
                   0.0);
    }
    if (cavern) {
      const int xc = lp.named_var("x_" + *cavern);
      for (std::size_t k = 0; k <= H; ++k)
        lp.add_row(y + "/h2cap_" + std::to_string(k),
                   {{lp.named_var(y + "/sh2_" + std::to_string(k)), 1.0}, {xc, -1.0}}, Sense::Le,
                   0.0);
    }
    if (electrolyser) {
      const int xe = lp.named_var("x_" + *electrolyser);
      for (std::size_t t = 0; t < H; ++t)
        lp.add_row(y + "/cincap_" + std::to_string(t),
                   {{lp.named_var(y + "/cin_" + std::to_string(t)), 1.0}, {xe, -1.0}}, Sense::Le,
                   0.0);
    }
    if (turbine) {
      const int xg = lp.named_var("x_" + *turbine);
      for (std::size_t t = 0; t < H; ++t)
        lp.add_row(y + "/coutcap_" + std::to_string(t),
                   {{lp.named_var(y + "/cout_" + std::to_string(t)), 1.0}, {xg, -eff_out}},
                   Sense::Le, 0.0);
    }
  }

  return lp;
}

OracleResult oracle_monolithic(const std::vector<Scenario>& scenarios,
                               const TechnologyCatalog& catalog, const CostModel& cost_model,
                               const SolveOptions& opts, std::size_t max_variables) {
  OracleResult out;
  LpProblem lp;
  try {
    lp = build_oracle(scenarios, catalog, cost_model, max_variables);
  } catch (const SolverError&) {
    // An unservable hour: the robust problem is structurally infeasible.
    out.status = SolveStatus::Infeasible;
    return out;
  }
  const Solution sol = solve(lp, opts);
  out.status = sol.status;
  if (sol.optimal()) {
    out.design = design_from_solution(lp, sol, catalog, "oracle");
    out.cost = sol.objective;
  }
  return out;
}

namespace {

struct LoopContext {
  const RobustifyConfig& config;
  const std::vector<Scenario>& scenarios;
  const TechnologyCatalog& catalog;
  RobustifyResult& result;
};

// Applies the strategy's modification for the worst scenario of this
// iteration. Returns false when the strategy had nothing left to add
// (the loop then keeps running unchanged until the iteration cap, which
// is the honest report of a stalled strategy).
bool apply_modification(LoopContext& ctx, int iteration, const SystemDesign& design,
                        const SupplyGapSeries& worst_gaps, ModificationState& state,
                        Scenario& reference_data) {
  const RobustifyConfig& cfg = ctx.config;
  const Scenario& donor = scenario_by_id(ctx.scenarios, worst_gaps.scenario_id);
  auto log = [&](const std::string& kind, const std::string& detail) {
    ctx.result.modification_log.push_back({iteration, kind, worst_gaps.scenario_id, detail});
  };

  switch (cfg.strategy) {
    case Strategy::Mod1:
    case Strategy::Mod1Smoothed: {
      const bool smooth = cfg.strategy == Strategy::Mod1Smoothed;
      state = mod1_demand_increase(
          state, worst_gaps.gaps,
          smooth ? std::optional<int>(cfg.smoothing_half_width) : std::nullopt);
      log(smooth ? "mod1_smoothed" : "mod1", "added " + fmt(worst_gaps.total) + " MWh of demand");
      return true;
    }
    case Strategy::Mod2: {
      auto periods =
          cluster_gap_hours(worst_gaps, cfg.max_join_distance, cfg.epsilon_hour, iteration);
      for (const HourRange& run : donor_worse_runs(reference_data, donor, cfg.max_join_distance)) {
        const bool dup = std::any_of(periods.begin(), periods.end(), [&](const CriticalPeriod& p) {
          return p.hours.start == run.start && p.hours.end == run.end;
        });
        if (!dup) periods.push_back({worst_gaps.scenario_id, run, 0.0, 0.0, iteration});
      }
      auto ranked = rank_candidate_periods(design, reference_data, donor, ctx.catalog,
                                           std::move(periods));
      for (const auto& p : ranked) {
        const HourRange hours =
            padded_towards_donor(p.hours, cfg.splice_margin, reference_data, donor);
        for (const HourRange& part : unspliced_parts(hours, state.spliced_periods)) {
          try {
            auto [next, synthetic] = mod2_splice(state, reference_data, donor, part, iteration);
            state = std::move(next);
            reference_data = std::move(synthetic);
            log("mod2", "spliced hours " + std::to_string(part.start) + "-" +
                            std::to_string(part.end) + " from " + donor.year_id +
                            " (avg gap " + fmt(p.avg_gap) + ")");
            return true;
          } catch (const ModificationError&) {
            continue;  // raced into an overlap: advance
          }
        }
      }
      log("mod2", "stalled: every candidate period is already spliced");
      return false;
    }
    case Strategy::Mod3: {
      // Cutting planes fire once per year, on its first detected gaps:
      // the yearly balance, one sigma per structural period, and the
      // prefix stock cuts. Residual short-term gaps found later are
      // small by construction and are handled by demand additions.
      bool first_detection = !state.yearly_balance_years.count(worst_gaps.scenario_id);
      for (const auto& sv : state.sigma_vars)
        if (sv.year_id == worst_gaps.scenario_id) first_detection = false;
      if (first_detection) {
        // Unit supply weight: the yearly energy must cover demand plus
        // the observed gap. A weight below one over-constrains systems
        // that route little energy through conversion.
        state = mod3a_yearly_balance(state, donor, ctx.catalog, worst_gaps.total, 1.0);
        log("mod3a", "yearly balance cut, gap total " + fmt(worst_gaps.total) + " MWh");
        const auto periods =
            cluster_gap_hours(worst_gaps, cfg.max_join_distance, cfg.epsilon_hour, iteration);
        std::vector<HourRange> year_periods;
        for (const auto& p : periods) {
          state = mod3b_local_h2(state, donor, ctx.catalog, p.hours);
          log("mod3b", "sigma for hours " + std::to_string(p.hours.start) + "-" +
                           std::to_string(p.hours.end));
          year_periods.push_back(p.hours);
        }
        if (!year_periods.empty()) {
          state = mod3_h2_prefix(state, donor, ctx.catalog, year_periods);
          log("mod3",
              "prefix stock cuts over " + std::to_string(year_periods.size()) + " periods");
        }
      } else {
        state = mod1_demand_increase(state, worst_gaps.gaps, std::nullopt);
        log("mod1", "fallback, added " + fmt(worst_gaps.total) + " MWh of demand");
      }
      return true;
    }
    case Strategy::Mod4: {
      auto periods =
          cluster_gap_hours(worst_gaps, cfg.max_join_distance, cfg.epsilon_hour, iteration);
      const std::size_t before = state.extra_constraints.size();
      for (const auto& p : periods) {
        state = mod4_local_capacity(state, donor, ctx.catalog, p.hours);
        log("mod4", "local cut for hours " + std::to_string(p.hours.start) + "-" +
                        std::to_string(p.hours.end));
      }
      if (state.extra_constraints.size() == before) {
        log("mod4", "stalled: all local cuts already present");
        return false;
      }
      return true;
    }
    case Strategy::Mod6: {
      state = mod6_global_h2(state, worst_gaps.total);
      log("mod6", "end-of-year H2 requirement raised by " + fmt(worst_gaps.total) + " MWh");
      return true;
    }
  }
  return false;
}

}  // namespace

RobustifyResult robustify(const RobustifyConfig& config, const std::vector<Scenario>& scenarios,
                          const TechnologyCatalog& catalog, const CostModel& cost_model,
                          const SolveOptions& opts) {
  if (config.max_iterations < 1) throw InvalidParameter("max_iterations must be >= 1");
  if (scenarios.empty()) throw InvalidParameter("scenario set must not be empty");
  check_shared_series(scenarios);
  const Scenario& reference = scenario_by_id(scenarios, config.reference);

  RobustifyResult result;
  result.epsilon_gap = config.epsilon_gap_fraction * annual_demand(reference);
  result.reference_data = reference;
  result.state.alpha = config.alpha;

  LoopContext ctx{config, scenarios, catalog, result};

  for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
    result.iterations = iteration;
    const LpProblem lp = build_capex(result.reference_data, catalog, cost_model, result.state);
    const Solution sol = solve(lp, opts);
    if (!sol.optimal()) {
      result.converged = false;
      result.diagnostics = "capacity expansion solve ended with status " + to_string(sol.status) +
                           " at iteration " + std::to_string(iteration);
      return result;
    }
    result.design = design_from_solution(
        lp, sol, catalog, to_string(config.strategy) + ":" + reference.year_id);
    result.cost_trajectory.push_back(total_annual_cost(result.design, catalog, cost_model));

    const RobustnessReport report =
        is_robust(result.design, scenarios, catalog, result.epsilon_gap, opts);
    result.final_gaps.clear();
    for (const auto& [id, series] : report.per_year) result.final_gaps[id] = series.total;
    if (report.indeterminate) {
      result.converged = false;
      result.diagnostics = "feasibility testing failed: " +
                           (report.failures.empty() ? std::string("unknown") : report.failures[0]);
      return result;
    }
    if (report.robust) {
      result.converged = true;
      result.diagnostics.clear();
      return result;
    }
    if (iteration == config.max_iterations) {
      result.converged = false;
      result.diagnostics = "iteration limit reached with max total gap " +
                           fmt(report.max_total_gap()) + " MWh";
      return result;
    }
    const std::string worst = report.worst_scenario();
    apply_modification(ctx, iteration, result.design, report.per_year.at(worst), result.state,
                       result.reference_data);
  }
  return result;
}

}  // namespace robustcap
