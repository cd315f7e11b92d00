#include "robustcap/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "robustcap/csv_io.hpp"
#include "robustcap/errors.hpp"
#include "robustcap/model.hpp"

namespace robustcap {

using nlohmann::json;

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::string technology_class(const std::string& id) {
  std::string low;
  for (char c : id) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (low.find("wind") != std::string::npos) return "wind";
  if (low.find("pv") != std::string::npos || low.find("solar") != std::string::npos) return "pv";
  return "";
}

CorrelationStats flh_correlation(const std::vector<PerYearStat>& per_year) {
  if (per_year.size() < 3)
    throw InvalidParameter("flh_correlation needs at least 3 year results");
  std::vector<double> tac, fw, fp, sw, sp;
  for (const auto& s : per_year) {
    tac.push_back(s.tac);
    fw.push_back(s.flh_wind);
    fp.push_back(s.flh_pv);
    sw.push_back(s.cost_share_wind);
    sp.push_back(s.cost_share_pv);
  }
  CorrelationStats out;
  out.flh_wind_vs_tac = pearson(fw, tac);
  out.flh_pv_vs_tac = pearson(fp, tac);
  out.cost_share_wind_vs_tac = pearson(sw, tac);
  out.cost_share_pv_vs_tac = pearson(sp, tac);
  return out;
}

std::vector<PerYearStat> per_year_statistics(const std::vector<Scenario>& scenarios,
                                             const std::map<std::string, SystemDesign>& designs,
                                             const TechnologyCatalog& catalog,
                                             const CostModel& cost_model) {
  std::vector<PerYearStat> out;
  for (const auto& scen : scenarios) {
    auto it = designs.find(scen.year_id);
    if (it == designs.end()) continue;
    PerYearStat stat;
    stat.year = scen.year_id;
    stat.tac = total_annual_cost(it->second, catalog, cost_model);

    int wind_n = 0, pv_n = 0;
    for (const auto& id : catalog.supply_ids()) {
      const std::string cls = technology_class(id);
      if (cls.empty()) continue;
      double flh = 0.0;
      for (double a : scen.capacity_factors.at(id)) flh += a;
      if (cls == "wind") {
        stat.flh_wind += flh;
        ++wind_n;
      } else {
        stat.flh_pv += flh;
        ++pv_n;
      }
    }
    if (wind_n > 0) stat.flh_wind /= wind_n;
    if (pv_n > 0) stat.flh_pv /= pv_n;

    const auto breakdown = cost_breakdown(it->second, catalog, cost_model);
    double wind_cost = 0.0, pv_cost = 0.0;
    for (const auto& [id, cost] : breakdown) {
      const std::string cls = technology_class(id);
      if (cls == "wind") wind_cost += cost;
      if (cls == "pv") pv_cost += cost;
    }
    if (stat.tac > 0.0) {
      stat.cost_share_wind = wind_cost / stat.tac;
      stat.cost_share_pv = pv_cost / stat.tac;
    }
    out.push_back(std::move(stat));
  }
  return out;
}

namespace {

std::string opt_to_string(const std::optional<double>& v) {
  return v ? format_sig6(*v) : "absent";
}

}  // namespace

void write_report(const RunArtifact& artifact, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

  const auto& catalog = artifact.config.catalog;
  const auto& cost_model = artifact.config.cost_model;

  std::string designs_csv = "design,technology,capacity\n";
  std::string costs_csv = "design,technology,capacity,annualized_unit_cost,annual_cost\n";
  for (const auto& [name, design] : artifact.designs) {
    for (const auto& [tech, cap] : design.capacities) {
      designs_csv += name + "," + tech + "," + format_sig6(cap) + "\n";
      const double unit = annualize_cost(catalog.at(tech), cost_model);
      costs_csv += name + "," + tech + "," + format_sig6(cap) + "," + format_sig6(unit) + "," +
                   format_sig6(unit * cap) + "\n";
    }
  }
  write_text_file(out_dir + "/designs.csv", designs_csv);
  write_text_file(out_dir + "/cost_breakdown.csv", costs_csv);

  std::string gaps_csv = "design,scenario,month,gap_mwh\n";
  for (const auto& entry : artifact.gap_table)
    gaps_csv += entry.design + "," + entry.scenario + "," + std::to_string(entry.month) + "," +
                format_sig6(entry.gap_mwh) + "\n";
  write_text_file(out_dir + "/gap_table.csv", gaps_csv);

  std::string corr_csv = "metric,value\n";
  corr_csv += "pearson_flh_wind_vs_tac," + opt_to_string(artifact.correlations.flh_wind_vs_tac) + "\n";
  corr_csv += "pearson_flh_pv_vs_tac," + opt_to_string(artifact.correlations.flh_pv_vs_tac) + "\n";
  corr_csv += "pearson_cost_share_wind_vs_tac," +
              opt_to_string(artifact.correlations.cost_share_wind_vs_tac) + "\n";
  corr_csv += "pearson_cost_share_pv_vs_tac," +
              opt_to_string(artifact.correlations.cost_share_pv_vs_tac) + "\n";
  write_text_file(out_dir + "/correlations.csv", corr_csv);

  write_text_file(out_dir + "/config_snapshot.json", config_to_json(artifact.config));

  std::string summary;
  summary += "command: " + artifact.command + "\n";
  if (!artifact.strategy.empty()) summary += "strategy: " + artifact.strategy + "\n";
  summary += "converged: " + std::string(artifact.converged ? "yes" : "no") + "\n";
  if (artifact.iterations > 0)
    summary += "iterations: " + std::to_string(artifact.iterations) + "\n";
  for (const auto& [name, cost] : artifact.design_costs)
    summary += "tac[" + name + "]: " + format_sig6(cost) + " EUR/a\n";
  for (const auto& [name, gap] : artifact.final_gaps)
    summary += "gap[" + name + "]: " + format_sig6(gap) + " MWh\n";
  if (!artifact.cost_trajectory.empty()) {
    summary += "cost trajectory:";
    for (double c : artifact.cost_trajectory) summary += " " + format_sig6(c);
    summary += "\n";
  }
  for (const auto& rec : artifact.modification_log)
    summary += "iteration " + std::to_string(rec.iteration) + ": " + rec.kind + " [" +
               rec.scenario + "] " + rec.detail + "\n";
  write_text_file(out_dir + "/summary.txt", summary);
}

namespace {

json design_to_json(const SystemDesign& d) {
  json caps = json::object();
  for (const auto& [id, x] : d.capacities) caps[id] = x;
  return json{{"capacities", caps}, {"source", d.source}};
}

SystemDesign design_from_json(const json& j) {
  SystemDesign d;
  d.source = j.value("source", std::string());
  for (const auto& [id, x] : j.at("capacities").items()) d.capacities[id] = x.get<double>();
  return d;
}

json opt_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

std::optional<double> opt_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::string artifact_to_json(const RunArtifact& artifact) {
  json root;
  root["format_version"] = artifact.format_version;
  root["command"] = artifact.command;
  root["config"] = json::parse(config_to_json(artifact.config));
  json designs = json::object();
  for (const auto& [name, d] : artifact.designs) designs[name] = design_to_json(d);
  root["designs"] = designs;
  root["design_costs"] = artifact.design_costs;
  json gaps = json::array();
  for (const auto& e : artifact.gap_table)
    gaps.push_back({{"design", e.design},
                    {"scenario", e.scenario},
                    {"month", e.month},
                    {"gap_mwh", e.gap_mwh}});
  root["gap_table"] = gaps;
  json stats = json::array();
  for (const auto& s : artifact.per_year_stats)
    stats.push_back({{"year", s.year},
                     {"tac", s.tac},
                     {"flh_wind", s.flh_wind},
                     {"flh_pv", s.flh_pv},
                     {"cost_share_wind", s.cost_share_wind},
                     {"cost_share_pv", s.cost_share_pv}});
  root["per_year_stats"] = stats;
  root["correlations"] = {{"flh_wind_vs_tac", opt_json(artifact.correlations.flh_wind_vs_tac)},
                          {"flh_pv_vs_tac", opt_json(artifact.correlations.flh_pv_vs_tac)},
                          {"cost_share_wind_vs_tac",
                           opt_json(artifact.correlations.cost_share_wind_vs_tac)},
                          {"cost_share_pv_vs_tac",
                           opt_json(artifact.correlations.cost_share_pv_vs_tac)}};
  root["strategy"] = artifact.strategy;
  root["converged"] = artifact.converged;
  root["iterations"] = artifact.iterations;
  root["cost_trajectory"] = artifact.cost_trajectory;
  root["final_gaps"] = artifact.final_gaps;
  json log = json::array();
  for (const auto& rec : artifact.modification_log)
    log.push_back({{"iteration", rec.iteration},
                   {"kind", rec.kind},
                   {"scenario", rec.scenario},
                   {"detail", rec.detail}});
  root["modification_log"] = log;
  return root.dump(2) + "\n";
}

RunArtifact artifact_from_json(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(origin + ": " + e.what());
  }
  RunArtifact a;
  if (!root.contains("format_version"))
    throw SchemaError(origin + ": missing format_version");
  a.format_version = root["format_version"].get<std::string>();
  if (a.format_version != "1")
    throw SchemaError(origin + ": unsupported format_version " + a.format_version);
  a.command = root.value("command", std::string());
  a.config = parse_config(root.at("config").dump(), origin);
  for (const auto& [name, j] : root.at("designs").items())
    a.designs[name] = design_from_json(j);
  for (const auto& [name, c] : root.at("design_costs").items())
    a.design_costs[name] = c.get<double>();
  for (const auto& j : root.at("gap_table"))
    a.gap_table.push_back({j.at("design").get<std::string>(), j.at("scenario").get<std::string>(),
                           j.at("month").get<int>(), j.at("gap_mwh").get<double>()});
  for (const auto& j : root.at("per_year_stats")) {
    PerYearStat s;
    s.year = j.at("year").get<std::string>();
    s.tac = j.at("tac").get<double>();
    s.flh_wind = j.at("flh_wind").get<double>();
    s.flh_pv = j.at("flh_pv").get<double>();
    s.cost_share_wind = j.at("cost_share_wind").get<double>();
    s.cost_share_pv = j.at("cost_share_pv").get<double>();
    a.per_year_stats.push_back(std::move(s));
  }
  const json& corr = root.at("correlations");
  a.correlations.flh_wind_vs_tac = opt_from_json(corr.at("flh_wind_vs_tac"));
  a.correlations.flh_pv_vs_tac = opt_from_json(corr.at("flh_pv_vs_tac"));
  a.correlations.cost_share_wind_vs_tac = opt_from_json(corr.at("cost_share_wind_vs_tac"));
  a.correlations.cost_share_pv_vs_tac = opt_from_json(corr.at("cost_share_pv_vs_tac"));
  a.strategy = root.value("strategy", std::string());
  a.converged = root.value("converged", true);
  a.iterations = root.value("iterations", 0);
  a.cost_trajectory = root.value("cost_trajectory", std::vector<double>{});
  for (const auto& [name, g] : root.at("final_gaps").items())
    a.final_gaps[name] = g.get<double>();
  for (const auto& j : root.at("modification_log"))
    a.modification_log.push_back({j.at("iteration").get<int>(), j.at("kind").get<std::string>(),
                                  j.at("scenario").get<std::string>(),
                                  j.at("detail").get<std::string>()});
  return a;
}

void save_artifact(const RunArtifact& artifact, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  write_text_file(dir + "/artifact.json", artifact_to_json(artifact));
}

RunArtifact load_artifact(const std::string& dir) {
  return artifact_from_json(read_text_file(dir + "/artifact.json"), dir + "/artifact.json");
}

}  // namespace robustcap
