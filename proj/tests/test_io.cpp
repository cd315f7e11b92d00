#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "robustcap/config.hpp"
#include "robustcap/csv_io.hpp"
#include "robustcap/errors.hpp"
#include "robustcap/report.hpp"
#include "testutil.hpp"

using namespace robustcap;
using namespace testutil;

namespace {

std::string slurp(const std::string& path) { return read_text_file(path); }

}  // namespace

TEST_CASE("scenario csv parses and validates") {
  const TechnologyCatalog catalog = make_catalog();
  const std::string text =
      "hour,cf_wind,cf_pv\n"
      "0,0,0\n"
      "1,0.5,0.25\n"
      "2,1,0.75\n";
  std::istringstream in(text);
  const Scenario s = read_scenario_csv(in, "mem", {10.0, 20.0, 30.0}, "y", &catalog);
  CHECK(s.horizon == 3);
  CHECK(s.capacity_factors.at("wind") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(s.demand == std::vector<double>{10.0, 20.0, 30.0});
}

TEST_CASE("capacity factor outside [0,1] names the row") {
  std::istringstream in("hour,cf_wind\n0,0.5\n1,1.2\n");
  CHECK_THROWS_WITH_AS(read_scenario_csv(in, "mem", {1.0, 1.0}, "y"),
                       doctest::Contains("row 3"), SchemaError);
}

TEST_CASE("NaN and negative values are rejected") {
  std::istringstream bad1("hour,cf_wind\n0,nan\n");
  CHECK_THROWS_AS(read_scenario_csv(bad1, "mem", {1.0}, "y"), SchemaError);
  std::istringstream bad2("hour,demand_mw\n0,-5\n");
  CHECK_THROWS_AS(read_demand_csv(bad2, "mem"), SchemaError);
}

TEST_CASE("horizon mismatch against the demand series is detected") {
  std::istringstream in("hour,cf_wind\n0,0.5\n1,0.5\n");
  CHECK_THROWS_WITH_AS(read_scenario_csv(in, "mem", {1.0, 1.0, 1.0}, "y"),
                       doctest::Contains("horizon"), SchemaError);
}

TEST_CASE("missing and unknown columns are schema errors") {
  const TechnologyCatalog catalog = make_catalog();
  std::istringstream missing("hour,cf_wind\n0,0.5\n");
  CHECK_THROWS_WITH_AS(read_scenario_csv(missing, "mem", {1.0}, "y", &catalog),
                       doctest::Contains("cf_pv"), SchemaError);
  std::istringstream unknown("hour,cf_wind,cf_pv,cf_coal\n0,0.5,0.5,0.5\n");
  CHECK_THROWS_WITH_AS(read_scenario_csv(unknown, "mem", {1.0}, "y", &catalog),
                       doctest::Contains("cf_coal"), SchemaError);
}

TEST_CASE("zero demand file is valid") {
  std::istringstream in("hour,demand_mw\n0,0\n1,0\n");
  const auto demand = read_demand_csv(in, "mem");
  CHECK(demand == std::vector<double>{0.0, 0.0});
}

TEST_CASE("scenario and demand series round-trip through their writers") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> wind(17), pv(17), demand(17);
  for (std::size_t t = 0; t < 17; ++t) {
    wind[t] = u(rng);
    pv[t] = u(rng);
    demand[t] = u(rng) * 12345.6789;
  }
  const Scenario original = make_scenario("y", wind, pv, demand);

  std::istringstream sin(scenario_csv_text(original));
  const Scenario back = read_scenario_csv(sin, "mem", demand, "y");
  CHECK(back.capacity_factors == original.capacity_factors);

  std::istringstream din(demand_csv_text(demand));
  CHECK(read_demand_csv(din, "mem") == demand);
}

TEST_CASE("config parses technologies, cost model and parameters") {
  const std::string text = R"({
    "cost_model": {"annualization": "annuity", "discount_rate": 0.05,
                   "shedding_penalty_m": 2e6},
    "algorithm": {"epsilon_gap_fraction": 0.002, "max_iterations": 15, "alpha": 0.8},
    "technologies": {
      "wind": {"kind": "supply", "capex": 1e6, "opex_fix": 25000,
               "lifetime_years": 20, "max_capacity": 500},
      "battery": {"kind": "storage", "medium": "electricity", "capex": 131000,
                  "opex_fix": 3300, "lifetime_years": 15, "max_capacity": 100,
                  "self_discharge_per_hour": 4e-5},
      "cavern": {"kind": "storage", "medium": "hydrogen", "capex": 700,
                 "opex_fix": 10, "lifetime_years": 40, "max_capacity": 1e6},
      "electrolyser": {"kind": "conversion", "conversion_in_eff": 0.7, "capex": 350000,
                       "opex_fix": 11000, "lifetime_years": 10, "max_capacity": 300},
      "ccgt": {"kind": "conversion", "conversion_out_eff": 0.6, "capex": 760000,
               "opex_fix": 23000, "lifetime_years": 20, "max_capacity": 300}
    }
  })";
  const SystemConfig cfg = parse_config(text, "mem");
  CHECK(cfg.cost_model.annualization == Annualization::Annuity);
  CHECK(cfg.cost_model.discount_rate == 0.05);
  CHECK(cfg.params.max_iterations == 15);
  CHECK(cfg.params.alpha == 0.8);
  CHECK(cfg.catalog.size() == 5);
  CHECK(cfg.catalog.at("battery").self_discharge_per_hour == doctest::Approx(4e-5));
  CHECK(*cfg.catalog.storage_id(StorageMedium::Hydrogen) == "cavern");

  // Round-trips through the snapshot writer.
  const SystemConfig again = parse_config(config_to_json(cfg), "snapshot");
  CHECK(config_to_json(again) == config_to_json(cfg));
}

TEST_CASE("config errors carry the offending key") {
  CHECK_THROWS_WITH_AS(parse_config("{}", "mem"), doctest::Contains("technologies"),
                       SchemaError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"technologies":{"x":{"kind":"supply","opex_fix":0,
        "lifetime_years":10,"max_capacity":1}}})",
                   "mem"),
      doctest::Contains("capex"), SchemaError);
  CHECK_THROWS_AS(parse_config("not json", "mem"), SchemaError);
}

TEST_CASE("pearson correlation") {
  SUBCASE("perfectly anti-linear data gives -1") {
    const auto r = pearson({1, 2, 3, 4}, {8, 6, 4, 2});
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(-1.0));
  }
  SUBCASE("zero variance is absent, not zero") {
    CHECK_FALSE(pearson({1, 2, 3}, {5, 5, 5}).has_value());
    CHECK_FALSE(pearson({2, 2, 2}, {1, 2, 3}).has_value());
  }
  SUBCASE("hand-computed four-point dataset") {
    // x = 1,2,4,5; y = 3,1,5,7: sxy = 12, sxx = 10, syy = 20.
    const auto r = pearson({1, 2, 4, 5}, {3, 1, 5, 7});
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(12.0 / std::sqrt(200.0)).epsilon(1e-12));
  }
}

TEST_CASE("flh correlation needs three years and classifies technologies") {
  CHECK_THROWS_AS(flh_correlation({PerYearStat{}, PerYearStat{}}), InvalidParameter);
  CHECK(technology_class("wind_onshore") == "wind");
  CHECK(technology_class("PV_rooftop") == "pv");
  CHECK(technology_class("solar_field") == "pv");
  CHECK(technology_class("cavern") == "");

  std::vector<PerYearStat> stats;
  for (int k = 0; k < 4; ++k) {
    PerYearStat s;
    s.year = "y" + std::to_string(k);
    s.flh_wind = 10.0 - k;
    s.flh_pv = 5.0;
    s.cost_share_wind = 0.1 * k;
    s.cost_share_pv = 0.4;
    s.tac = 100.0 + 10.0 * k;
    stats.push_back(s);
  }
  const CorrelationStats c = flh_correlation(stats);
  REQUIRE(c.flh_wind_vs_tac.has_value());
  CHECK(*c.flh_wind_vs_tac == doctest::Approx(-1.0));
  CHECK_FALSE(c.flh_pv_vs_tac.has_value());  // constant
  REQUIRE(c.cost_share_wind_vs_tac.has_value());
  CHECK(*c.cost_share_wind_vs_tac == doctest::Approx(1.0));
}

TEST_CASE("report writing is deterministic and artifacts round-trip") {
  const std::string dir1 = "io_test_run1";
  const std::string dir2 = "io_test_run2";
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);

  RunArtifact artifact;
  artifact.command = "robustify";
  artifact.strategy = "mod2";
  artifact.converged = true;
  artifact.iterations = 2;
  SystemConfig cfg;
  cfg.catalog = make_catalog();
  artifact.config = cfg;
  artifact.designs["a"] = design_of(cfg.catalog, {{"wind", 100.0}, {"pv", 50.0}}, "a");
  artifact.designs["robust"] =
      design_of(cfg.catalog, {{"wind", 120.0}, {"pv", 60.0}}, "robust");
  artifact.design_costs["a"] = 1.0e7;
  artifact.design_costs["robust"] = 1.2e7;
  artifact.gap_table.push_back({"a", "b", 0, 123.456});
  artifact.final_gaps["b"] = 123.456;
  artifact.cost_trajectory = {1.0e7, 1.2e7};
  artifact.modification_log.push_back({1, "mod2", "b", "spliced hours 3-9"});
  PerYearStat stat;
  stat.year = "a";
  stat.tac = 1.0e7;
  artifact.per_year_stats.push_back(stat);

  write_report(artifact, dir1);
  write_report(artifact, dir2);
  for (const std::string name :
       {"designs.csv", "cost_breakdown.csv", "gap_table.csv", "correlations.csv",
        "summary.txt", "config_snapshot.json"}) {
    CAPTURE(name);
    CHECK(slurp(dir1 + "/" + name) == slurp(dir2 + "/" + name));
  }

  // Two-design artifact: one cost row per (design, technology).
  const std::string costs = slurp(dir1 + "/cost_breakdown.csv");
  CHECK(std::count(costs.begin(), costs.end(), '\n') ==
        1 + 2 * static_cast<long>(cfg.catalog.size()));

  save_artifact(artifact, dir1);
  const RunArtifact back = load_artifact(dir1);
  CHECK(artifact_to_json(back) == artifact_to_json(artifact));

  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("empty scenario set writes header-only tables") {
  const std::string dir = "io_test_empty";
  std::filesystem::remove_all(dir);
  RunArtifact artifact;
  artifact.command = "report";
  SystemConfig cfg;
  cfg.catalog = make_catalog();
  artifact.config = cfg;
  write_report(artifact, dir);
  CHECK(slurp(dir + "/designs.csv") == "design,technology,capacity\n");
  CHECK(slurp(dir + "/gap_table.csv") == "design,scenario,month,gap_mwh\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("unsupported artifact version is rejected") {
  CHECK_THROWS_WITH_AS(artifact_from_json(R"({"format_version":"99"})", "mem"),
                       doctest::Contains("format_version"), SchemaError);
}
