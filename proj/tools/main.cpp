#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "robustcap/csv_io.hpp"
#include "robustcap/config.hpp"
#include "robustcap/errors.hpp"
#include "robustcap/feasibility.hpp"
#include "robustcap/lp_text.hpp"
#include "robustcap/model.hpp"
#include "robustcap/report.hpp"
#include "robustcap/robustify.hpp"

namespace rc = robustcap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInputError = 3;
constexpr int kExitSolverFailure = 4;
constexpr int kHoursPerMonth = 730;

struct CommonArgs {
  std::string config_path;
  std::string demand_path;
  std::vector<std::string> scenario_paths;
  std::string out_dir;
  std::string export_lp;
  bool serial = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_scenarios) {
  cmd->add_option("--config", args.config_path, "system configuration JSON")->required();
  cmd->add_option("--demand", args.demand_path, "demand CSV (hour,demand_mw)")->required();
  if (with_scenarios)
    cmd->add_option("--scenarios", args.scenario_paths, "scenario CSV files")
        ->required()
        ->expected(-1);
  cmd->add_option("--out", args.out_dir, "output directory for the run artifact and report");
  cmd->add_option("--export-lp", args.export_lp, "write the command's LP to this path");
  cmd->add_flag("--serial", args.serial, "disable the OpenMP kernels");
  cmd->add_option("--threads", args.threads, "OpenMP thread count");
}

rc::SolveOptions solve_options(const CommonArgs& args) {
  rc::SolveOptions opts;
  if (args.serial) opts.exec = rc::ExecMode::Serial;
#ifdef _OPENMP
  if (args.threads > 0) omp_set_num_threads(args.threads);
#endif
  return opts;
}

// Year id from the file name; a conventional "scenario_" prefix is
// dropped, so scenario_y1994.csv is addressed as y1994.
std::string year_id_of(const std::string& path) {
  std::string stem = rc::path_stem(path);
  if (stem.rfind("scenario_", 0) == 0) stem = stem.substr(9);
  return stem;
}

std::vector<rc::Scenario> load_scenarios(const CommonArgs& args, const rc::SystemConfig& cfg,
                                         const std::vector<double>& demand) {
  std::vector<rc::Scenario> scenarios;
  for (const auto& path : args.scenario_paths)
    scenarios.push_back(rc::load_scenario_csv(path, demand, year_id_of(path), &cfg.catalog));
  return scenarios;
}

rc::SystemDesign load_design_json(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(rc::read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw rc::SchemaError(path + ": " + e.what());
  }
  rc::SystemDesign d;
  d.source = j.value("source", rc::path_stem(path));
  if (!j.contains("capacities") || !j["capacities"].is_object())
    throw rc::SchemaError(path + ": missing 'capacities' object");
  for (const auto& [id, x] : j["capacities"].items()) d.capacities[id] = x.get<double>();
  return d;
}

std::vector<rc::GapTableEntry> monthly_gap_rows(const std::string& design_name,
                                                const rc::RobustnessReport& report,
                                                std::size_t horizon) {
  std::vector<rc::GapTableEntry> rows;
  const int months = static_cast<int>((horizon + kHoursPerMonth - 1) / kHoursPerMonth);
  for (const auto& [scenario, series] : report.per_year) {
    std::vector<double> by_month(months, 0.0);
    for (std::size_t t = 0; t < series.gaps.size(); ++t)
      by_month[t / kHoursPerMonth] += series.gaps[t];
    for (int mth = 0; mth < months; ++mth)
      rows.push_back({design_name, scenario, mth, by_month[mth]});
  }
  return rows;
}

void finish_artifact(rc::RunArtifact& artifact, const CommonArgs& args) {
  if (args.out_dir.empty()) return;
  rc::save_artifact(artifact, args.out_dir);
  rc::write_report(artifact, args.out_dir);
}

int cmd_optimize(const CommonArgs& args, const std::string& scenario_path) {
  const rc::SystemConfig cfg = rc::load_config(args.config_path);
  const auto demand = rc::load_demand_csv(args.demand_path);
  const rc::Scenario scenario =
      rc::load_scenario_csv(scenario_path, demand, year_id_of(scenario_path), &cfg.catalog);
  const rc::SolveOptions opts = solve_options(args);

  if (!args.export_lp.empty()) {
    const rc::LpProblem lp =
        rc::build_capex(scenario, cfg.catalog, cfg.cost_model, rc::ModificationState{});
    rc::write_text_file(args.export_lp, rc::export_lp_file(lp));
  }
  const rc::SingleYearResult result =
      rc::solve_single_year(scenario, cfg.catalog, cfg.cost_model, opts);

  std::printf("scenario %s: TAC %s EUR/a, shed %s MWh\n", scenario.year_id.c_str(),
              rc::format_sig6(result.tac).c_str(), rc::format_sig6(result.shed_total).c_str());
  for (const auto& [id, x] : result.design.capacities)
    std::printf("  %-20s %s\n", id.c_str(), rc::format_sig6(x).c_str());

  rc::RunArtifact artifact;
  artifact.command = "optimize";
  artifact.config = cfg;
  artifact.designs[scenario.year_id] = result.design;
  artifact.design_costs[scenario.year_id] = result.tac;
  finish_artifact(artifact, args);
  return kExitOk;
}

int cmd_feastest(const CommonArgs& args, const std::string& design_path) {
  const rc::SystemConfig cfg = rc::load_config(args.config_path);
  const auto demand = rc::load_demand_csv(args.demand_path);
  const auto scenarios = load_scenarios(args, cfg, demand);
  const rc::SystemDesign design = load_design_json(design_path);
  const rc::SolveOptions opts = solve_options(args);

  if (!args.export_lp.empty()) {
    const rc::LpProblem lp = rc::build_feasibility(design, scenarios.front(), cfg.catalog);
    rc::write_text_file(args.export_lp, rc::export_lp_file(lp));
  }

  const double eps_gap = cfg.params.epsilon_gap_fraction * rc::annual_demand(scenarios.front());
  const rc::RobustnessReport report =
      rc::is_robust(design, scenarios, cfg.catalog, eps_gap, opts);
  if (report.indeterminate)
    throw rc::SolverError(report.failures.empty() ? "feasibility test failed"
                                             : report.failures.front());

  for (const auto& [id, series] : report.per_year) {
    const rc::Scenario* scen = nullptr;
    for (const auto& s : scenarios)
      if (s.year_id == id) scen = &s;
    const rc::LossOfLoadSummary summary =
        rc::loss_of_load_summary(series, *scen, cfg.params.epsilon_hour);
    std::printf("scenario %s: gap %s MWh (%s of demand), peak %s MW, %zu gap hours\n",
                id.c_str(), rc::format_sig6(summary.total_gap).c_str(),
                rc::format_sig6(summary.fraction_of_annual_demand).c_str(),
                rc::format_sig6(summary.peak_hourly_gap).c_str(), summary.gap_hours);
  }
  std::printf("robust: %s (epsilon %s MWh)\n", report.robust ? "yes" : "no",
              rc::format_sig6(eps_gap).c_str());

  rc::RunArtifact artifact;
  artifact.command = "feastest";
  artifact.config = cfg;
  artifact.designs[design.source.empty() ? "design" : design.source] = design;
  artifact.design_costs[design.source.empty() ? "design" : design.source] =
      rc::total_annual_cost(design, cfg.catalog, cfg.cost_model);
  artifact.converged = report.robust;
  for (const auto& [id, series] : report.per_year) artifact.final_gaps[id] = series.total;
  artifact.gap_table = monthly_gap_rows(design.source.empty() ? "design" : design.source, report,
                                        scenarios.front().horizon);
  finish_artifact(artifact, args);
  return report.robust ? kExitOk : kExitNotConverged;
}

int cmd_robustify(const CommonArgs& args, const std::string& reference,
                  const std::string& strategy_name) {
  const rc::SystemConfig cfg = rc::load_config(args.config_path);
  const auto demand = rc::load_demand_csv(args.demand_path);
  const auto scenarios = load_scenarios(args, cfg, demand);
  const rc::SolveOptions opts = solve_options(args);

  rc::RobustifyConfig rcfg;
  rcfg.strategy = rc::strategy_from_string(strategy_name);
  rcfg.reference = reference;
  rcfg.max_iterations = cfg.params.max_iterations;
  rcfg.epsilon_gap_fraction = cfg.params.epsilon_gap_fraction;
  rcfg.epsilon_hour = cfg.params.epsilon_hour;
  rcfg.smoothing_half_width = cfg.params.smoothing_half_width;
  rcfg.max_join_distance = cfg.params.max_join_distance;
  rcfg.splice_margin = cfg.params.splice_margin;
  rcfg.alpha = cfg.params.alpha;

  const rc::RobustifyResult result =
      rc::robustify(rcfg, scenarios, cfg.catalog, cfg.cost_model, opts);

  if (!args.export_lp.empty()) {
    const rc::LpProblem lp =
        rc::build_capex(result.reference_data, cfg.catalog, cfg.cost_model, result.state);
    rc::write_text_file(args.export_lp, rc::export_lp_file(lp));
  }

  std::printf("strategy %s on reference %s: %s after %d iteration(s)\n", strategy_name.c_str(),
              reference.c_str(), result.converged ? "converged" : "NOT converged",
              result.iterations);
  if (!result.diagnostics.empty()) std::printf("  %s\n", result.diagnostics.c_str());
  if (!result.cost_trajectory.empty())
    std::printf("  final TAC %s EUR/a\n",
                rc::format_sig6(result.cost_trajectory.back()).c_str());
  for (const auto& [id, gap] : result.final_gaps)
    std::printf("  gap[%s] = %s MWh\n", id.c_str(), rc::format_sig6(gap).c_str());

  rc::RunArtifact artifact;
  artifact.command = "robustify";
  artifact.config = cfg;
  artifact.strategy = strategy_name;
  artifact.converged = result.converged;
  artifact.iterations = result.iterations;
  artifact.cost_trajectory = result.cost_trajectory;
  artifact.final_gaps = result.final_gaps;
  artifact.modification_log = result.modification_log;

  // Per-year optima for bounds and the correlation report.
  std::map<std::string, double> per_year_costs;
  for (const auto& scen : scenarios) {
    const rc::SingleYearResult single =
        rc::solve_single_year(scen, cfg.catalog, cfg.cost_model, opts);
    artifact.designs[scen.year_id] = single.design;
    artifact.design_costs[scen.year_id] = single.tac;
    per_year_costs[scen.year_id] = single.tac;
  }
  std::vector<rc::SystemDesign> single_designs;
  for (const auto& scen : scenarios) single_designs.push_back(artifact.designs[scen.year_id]);
  const rc::SystemDesign primal = rc::primal_bound_design(single_designs);
  artifact.designs["primal_bound"] = primal;
  artifact.design_costs["primal_bound"] =
      rc::total_annual_cost(primal, cfg.catalog, cfg.cost_model);
  artifact.designs["robust"] = result.design;
  artifact.design_costs["robust"] =
      rc::total_annual_cost(result.design, cfg.catalog, cfg.cost_model);
  std::printf("  dual bound %s EUR/a, primal bound %s EUR/a\n",
              rc::format_sig6(rc::dual_bound(per_year_costs)).c_str(),
              rc::format_sig6(artifact.design_costs["primal_bound"]).c_str());

  const double eps_gap = result.epsilon_gap;
  const rc::RobustnessReport final_report =
      rc::is_robust(result.design, scenarios, cfg.catalog, eps_gap, opts);
  artifact.gap_table = monthly_gap_rows("robust", final_report, scenarios.front().horizon);
  const rc::RobustnessReport ref_report = rc::is_robust(
      artifact.designs[reference], scenarios, cfg.catalog, eps_gap, opts);
  const auto ref_rows = monthly_gap_rows(reference, ref_report, scenarios.front().horizon);
  artifact.gap_table.insert(artifact.gap_table.end(), ref_rows.begin(), ref_rows.end());

  artifact.per_year_stats =
      rc::per_year_statistics(scenarios, artifact.designs, cfg.catalog, cfg.cost_model);
  if (artifact.per_year_stats.size() >= 3)
    artifact.correlations = rc::flh_correlation(artifact.per_year_stats);

  finish_artifact(artifact, args);
  return result.converged ? kExitOk : kExitNotConverged;
}

int cmd_oracle(const CommonArgs& args) {
  const rc::SystemConfig cfg = rc::load_config(args.config_path);
  const auto demand = rc::load_demand_csv(args.demand_path);
  const auto scenarios = load_scenarios(args, cfg, demand);
  const rc::SolveOptions opts = solve_options(args);

  if (!args.export_lp.empty()) {
    const rc::LpProblem lp = rc::build_oracle(scenarios, cfg.catalog, cfg.cost_model);
    rc::write_text_file(args.export_lp, rc::export_lp_file(lp));
  }
  const rc::OracleResult result =
      rc::oracle_monolithic(scenarios, cfg.catalog, cfg.cost_model, opts);
  if (result.status == rc::SolveStatus::Infeasible) {
    std::printf("oracle: no robust design exists within the capacity limits\n");
    return kExitNotConverged;
  }
  if (result.status != rc::SolveStatus::Optimal)
    throw rc::SolverError("oracle solve ended with status " + rc::to_string(result.status));

  std::printf("oracle robust minimum: %s EUR/a\n", rc::format_sig6(result.cost).c_str());
  for (const auto& [id, x] : result.design.capacities)
    std::printf("  %-20s %s\n", id.c_str(), rc::format_sig6(x).c_str());

  rc::RunArtifact artifact;
  artifact.command = "oracle";
  artifact.config = cfg;
  artifact.designs["oracle"] = result.design;
  artifact.design_costs["oracle"] = result.cost;
  finish_artifact(artifact, args);
  return kExitOk;
}

int cmd_report(const std::string& run_dir, const std::string& out_dir) {
  const rc::RunArtifact artifact = rc::load_artifact(run_dir);
  rc::write_report(artifact, out_dir.empty() ? run_dir : out_dir);
  std::printf("report written to %s\n", (out_dir.empty() ? run_dir : out_dir).c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robustcap: robust capacity-expansion planning"};
  app.require_subcommand(1);

  CommonArgs opt_args, feas_args, rob_args, orc_args;
  std::string scenario_path, design_path, reference, strategy, run_dir, report_out;

  CLI::App* optimize = app.add_subcommand("optimize", "single-year capacity expansion");
  add_common(optimize, opt_args, false);
  optimize->add_option("--scenario", scenario_path, "scenario CSV")->required();

  CLI::App* feastest = app.add_subcommand("feastest", "test a design against scenarios");
  add_common(feastest, feas_args, true);
  feastest->add_option("--design", design_path, "design JSON file")->required();

  CLI::App* robustify = app.add_subcommand("robustify", "run the robustification loop");
  add_common(robustify, rob_args, true);
  robustify->add_option("--reference", reference, "reference scenario (file stem)")->required();
  robustify
      ->add_option("--strategy", strategy, "one of mod1, mod1s, mod2, mod3, mod4, mod6")
      ->required();

  CLI::App* oracle = app.add_subcommand("oracle", "exact robust minimum (monolithic LP)");
  add_common(oracle, orc_args, true);

  CLI::App* report = app.add_subcommand("report", "regenerate reports from a run directory");
  report->add_option("--run", run_dir, "run directory containing artifact.json")->required();
  report->add_option("--out", report_out, "destination directory (default: run directory)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (optimize->parsed()) return cmd_optimize(opt_args, scenario_path);
    if (feastest->parsed()) return cmd_feastest(feas_args, design_path);
    if (robustify->parsed()) return cmd_robustify(rob_args, reference, strategy);
    if (oracle->parsed()) return cmd_oracle(orc_args);
    if (report->parsed()) return cmd_report(run_dir, report_out);
  } catch (const rc::SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
  return kExitInputError;
}
