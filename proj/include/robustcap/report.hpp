#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "robustcap/config.hpp"
#include "robustcap/robustify.hpp"
#include "robustcap/types.hpp"

namespace robustcap {

/// Inputs for the full-load-hours / cost correlation analysis, one entry
/// per weather year.
struct PerYearStat {
  std::string year;
  double tac = 0.0;
  double flh_wind = 0.0;        ///< mean annual capacity-factor sum of wind-class techs
  double flh_pv = 0.0;          ///< same for pv-class techs
  double cost_share_wind = 0.0;
  double cost_share_pv = 0.0;
};

struct CorrelationStats {
  std::optional<double> flh_wind_vs_tac;
  std::optional<double> flh_pv_vs_tac;
  std::optional<double> cost_share_wind_vs_tac;
  std::optional<double> cost_share_pv_vs_tac;
};

struct GapTableEntry {
  std::string design;
  std::string scenario;
  int month = 0;  ///< hour / 730
  double gap_mwh = 0.0;
};

/// Everything a run leaves behind; round-trips through artifact.json.
struct RunArtifact {
  std::string format_version = "1";
  std::string command;
  SystemConfig config;
  std::map<std::string, SystemDesign> designs;  ///< per-year optima, bounds, robust
  std::map<std::string, double> design_costs;   ///< TAC per design
  std::vector<GapTableEntry> gap_table;
  std::vector<PerYearStat> per_year_stats;
  CorrelationStats correlations;
  std::string strategy;
  bool converged = true;
  int iterations = 0;
  std::vector<double> cost_trajectory;
  std::map<std::string, double> final_gaps;
  std::vector<ModificationRecord> modification_log;
};

/// Pearson correlation coefficient; absent when either side has zero
/// variance.
std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys);

/// Correlates annual full-load hours and cost shares against TAC over
/// the per-year results. Requires at least three years.
CorrelationStats flh_correlation(const std::vector<PerYearStat>& per_year);

/// Classifies a technology id for the correlation report: "wind",
/// "pv" (also matching solar), or empty.
std::string technology_class(const std::string& id);

/// Derives the per-year statistics from single-year designs and costs.
std::vector<PerYearStat> per_year_statistics(const std::vector<Scenario>& scenarios,
                                             const std::map<std::string, SystemDesign>& designs,
                                             const TechnologyCatalog& catalog,
                                             const CostModel& cost_model);

/// Writes the deterministic report files (summary.txt, designs.csv,
/// cost_breakdown.csv, gap_table.csv, correlations.csv,
/// config_snapshot.json) into out_dir, creating it if needed.
void write_report(const RunArtifact& artifact, const std::string& out_dir);

std::string artifact_to_json(const RunArtifact& artifact);
RunArtifact artifact_from_json(const std::string& text, const std::string& origin);

/// artifact.json inside dir.
void save_artifact(const RunArtifact& artifact, const std::string& dir);
RunArtifact load_artifact(const std::string& dir);

}  // namespace robustcap
