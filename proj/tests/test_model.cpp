#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "robustcap/errors.hpp"
#include "robustcap/model.hpp"
#include "robustcap/simplex.hpp"
#include "testutil.hpp"

using namespace robustcap;
using namespace testutil;

TEST_CASE("annualized cost, straight line: H2 salt cavern") {
  // Values in EUR/kWh to match the cost table's units; the arithmetic is
  // unit-blind: 0.7/40 + 0.01 = 0.0275.
  Technology cavern;
  cavern.kind = TechKind::Storage;
  cavern.medium = StorageMedium::Hydrogen;
  cavern.capex = 0.7;
  cavern.opex_fix = 0.01;
  cavern.lifetime_years = 40;
  CostModel cm;
  CHECK(annualize_cost(cavern, cm) == doctest::Approx(0.0275).epsilon(1e-12));
}

TEST_CASE("annualized cost, zero technology") {
  Technology t;
  t.capex = 0.0;
  t.opex_fix = 0.0;
  t.lifetime_years = 20;
  CHECK(annualize_cost(t, CostModel{}) == 0.0);
}

TEST_CASE("annualized cost, annuity: onshore wind at 8%") {
  // Independent closed form: r(1+r)^L / ((1+r)^L - 1).
  const double q = std::pow(1.08, 20);
  const double af = 0.08 * q / (q - 1.0);
  CHECK(af == doctest::Approx(0.101852).epsilon(1e-5));
  CHECK(annuity_factor(0.08, 20) == doctest::Approx(af).epsilon(1e-14));

  Technology wind;
  wind.capex = 1000.0;
  wind.opex_fix = 25.0;
  wind.lifetime_years = 20;
  CostModel cm;
  cm.annualization = Annualization::Annuity;
  cm.discount_rate = 0.08;
  CHECK(annualize_cost(wind, cm) == doctest::Approx(25.0 + 1000.0 * af).epsilon(1e-12));
  CHECK(annualize_cost(wind, cm) >= wind.opex_fix);
}

TEST_CASE("annuity at rate zero equals straight line") {
  CHECK(annuity_factor(0.0, 25) == doctest::Approx(1.0 / 25.0));
}

TEST_CASE("invalid lifetime is rejected") {
  CHECK_THROWS_AS(annuity_factor(0.05, 0), InvalidParameter);
}

TEST_CASE("capex LP variable count follows the reference layout") {
  // Horizon 4, six technologies. Capacities (6) + electric storage
  // levels (H, cyclic by index wrap) + hydrogen levels (H+1, explicit
  // initial level) + conversion flows (2H) + shedding (H) = 27.
  const TechnologyCatalog catalog = make_catalog();
  const Scenario s = make_scenario("y", {0.5, 0.5, 0.5, 0.5}, {0.0, 0.4, 0.4, 0.0},
                                   {100.0, 100.0, 100.0, 100.0});
  const LpProblem lp = build_capex(s, catalog, CostModel{}, ModificationState{});
  const std::size_t expected = 6 + 4 + (4 + 1) + 4 + 4 + 4;
  CHECK(lp.num_vars() == expected);
  CHECK(lp.num_vars() == 27);
  CHECK(lp.tagged("x").size() == 6);
  CHECK(lp.tagged("storage_el").size() == 4);
  CHECK(lp.tagged("storage_h2").size() == 5);
  CHECK(lp.tagged("conv_in").size() == 4);
  CHECK(lp.tagged("conv_out").size() == 4);
  CHECK(lp.tagged("shed").size() == 4);
}

TEST_CASE("zero demand optimizes to an empty system") {
  const TechnologyCatalog catalog = make_catalog();
  const Scenario s = make_scenario("y", {0.5, 0.5, 0.5}, {0.1, 0.1, 0.1}, {0.0, 0.0, 0.0});
  const LpProblem lp = build_capex(s, catalog, CostModel{}, ModificationState{});
  const Solution sol = solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-9));
  const SystemDesign d = design_from_solution(lp, sol, catalog, "y");
  for (const auto& [id, x] : d.capacities) CHECK(x == doctest::Approx(0.0));
}

TEST_CASE("registering one yearly-balance cut adds exactly one row") {
  const TechnologyCatalog catalog = make_catalog();
  const Scenario s = flat_scenario("y", 6, 0.5, 100.0);
  const LpProblem base = build_capex(s, catalog, CostModel{}, ModificationState{});
  ModificationState mods;
  mods = mod3a_yearly_balance(mods, s, catalog, 0.0, 1.0);
  const LpProblem with = build_capex(s, catalog, CostModel{}, mods);
  CHECK(with.num_rows() == base.num_rows() + 1);
  CHECK(with.num_vars() == base.num_vars());
}

TEST_CASE("missing capacity factors is a schema error") {
  const TechnologyCatalog catalog = make_catalog();
  Scenario s = flat_scenario("y", 4, 0.5, 50.0);
  s.capacity_factors.erase("pv");
  CHECK_THROWS_AS(build_capex(s, catalog, CostModel{}, ModificationState{}), SchemaError);
}

TEST_CASE("horizon mismatch is a schema error") {
  const TechnologyCatalog catalog = make_catalog();
  Scenario s = flat_scenario("y", 4, 0.5, 50.0);
  s.capacity_factors["wind"].pop_back();
  CHECK_THROWS_AS(build_capex(s, catalog, CostModel{}, ModificationState{}), SchemaError);
}

TEST_CASE("feasibility LP: oversized design has zero gap") {
  const TechnologyCatalog catalog = make_catalog();
  const Scenario s = flat_scenario("y", 12, 0.5, 100.0);
  const SystemDesign big = design_of(
      catalog, {{"wind", 1000.0}, {"pv", 0.0}, {"battery", 5000.0}, {"cavern", 10000.0},
                {"electrolyser", 100.0}, {"ccgt", 100.0}},
      "big");
  const LpProblem lp = build_feasibility(big, s, catalog);
  const Solution sol = solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("feasibility LP: zero design accumulates the whole demand") {
  const TechnologyCatalog catalog = make_catalog();
  const Scenario s = make_scenario("y", {0.3, 0.3, 0.3}, {0.0, 0.0, 0.0}, {5.0, 7.0, 3.0});
  const LpProblem lp = build_feasibility(zero_design(catalog), s, catalog);
  const Solution sol = solve(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(15.0));  // 5 + 7 + 3 by hand
  const auto gaps = tagged_values(lp, sol, "gap");
  REQUIRE(gaps.size() == 3);
  CHECK(gaps[0] == doctest::Approx(5.0));
  CHECK(gaps[1] == doctest::Approx(7.0));
  CHECK(gaps[2] == doctest::Approx(3.0));
}

TEST_CASE("feasibility LP: the capex optimum is self-feasible") {
  const TechnologyCatalog catalog = make_catalog();
  Scenario s = flat_scenario("y", 24, 0.45, 100.0);
  s = with_wind_lull(s, 6, 10, 0.05);
  const LpProblem capex = build_capex(s, catalog, CostModel{}, ModificationState{});
  const Solution capex_sol = solve(capex);
  REQUIRE(capex_sol.optimal());
  const SystemDesign d = design_from_solution(capex, capex_sol, catalog, "y");
  const LpProblem comp = build_feasibility(d, s, catalog);
  const Solution sol = solve(comp);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("feasibility LP rejects designs beyond the capacity limits") {
  const TechnologyCatalog catalog = make_catalog(CatalogLimits{.wind = 10.0});
  const Scenario s = flat_scenario("y", 4, 0.5, 5.0);
  const SystemDesign bad = design_of(catalog, {{"wind", 11.0}}, "bad");
  CHECK_THROWS_AS(build_feasibility(bad, s, catalog), InvalidDesign);
}

TEST_CASE("total annual cost: zero, linearity, homogeneity") {
  const TechnologyCatalog catalog = make_catalog();
  const CostModel cm;
  CHECK(total_annual_cost(zero_design(catalog), catalog, cm) == 0.0);

  TechnologyCatalog tiny;
  Technology t;
  t.kind = TechKind::Supply;
  t.capex = 0.0;
  t.opex_fix = 3.0;
  t.lifetime_years = 10;
  t.max_capacity = 100.0;
  tiny.add("only", t);
  SystemDesign d;
  d.capacities["only"] = 2.0;
  CHECK(total_annual_cost(d, tiny, cm) == doctest::Approx(6.0));

  SystemDesign mixed = design_of(
      catalog, {{"wind", 3.0}, {"pv", 7.0}, {"battery", 11.0}, {"cavern", 13.0},
                {"electrolyser", 2.0}, {"ccgt", 5.0}},
      "m");
  SystemDesign doubled = mixed;
  for (auto& [id, x] : doubled.capacities) x *= 2.0;
  CHECK(total_annual_cost(doubled, catalog, cm) ==
        doctest::Approx(2.0 * total_annual_cost(mixed, catalog, cm)).epsilon(1e-12));
}

TEST_CASE("potential supply") {
  const TechnologyCatalog catalog = make_catalog();
  const Scenario s = make_scenario("y", {0.5, 1.0}, {0.0, 1.0}, {50.0, 50.0});
  CHECK(potential_supply(zero_design(catalog), s, catalog, 0) == 0.0);

  const SystemDesign d = design_of(catalog, {{"wind", 10.0}, {"ccgt", 4.0}}, "d");
  CHECK(potential_supply(d, s, catalog, 0) == doctest::Approx(7.4));  // 10*0.5 + 4*0.6

  const SystemDesign full = design_of(catalog, {{"wind", 10.0}, {"pv", 5.0}}, "f");
  CHECK(potential_supply(full, s, catalog, 1) == doctest::Approx(15.0));
  CHECK_THROWS_AS(potential_supply(d, s, catalog, 2), InvalidParameter);
}

TEST_CASE("shedding stays unused whenever a zero-shedding solution exists") {
  const TechnologyCatalog catalog = make_catalog();
  Scenario s = flat_scenario("y", 24, 0.5, 80.0);
  s = with_wind_lull(s, 3, 7, 0.1);
  const LpProblem lp = build_capex(s, catalog, CostModel{}, ModificationState{});
  const Solution sol = solve(lp);
  REQUIRE(sol.optimal());
  for (double shed : tagged_values(lp, sol, "shed")) CHECK(shed <= 1e-7);

  // Forcing shedding to zero must not change the optimum.
  LpProblem forced = lp;
  for (int idx : forced.tagged("shed")) forced.vars[idx].upper = 0.0;
  const Solution forced_sol = solve(forced);
  REQUIRE(forced_sol.optimal());
  CHECK(forced_sol.objective ==
        doctest::Approx(sol.objective).epsilon(1e-9));
}

TEST_CASE("cyclic hydrogen storage closes within tolerance") {
  const TechnologyCatalog catalog = make_catalog();
  Scenario s = flat_scenario("y", 24, 0.5, 90.0);
  s = with_wind_lull(s, 10, 20, 0.02);
  const LpProblem lp = build_capex(s, catalog, CostModel{}, ModificationState{});
  const Solution sol = solve(lp);
  REQUIRE(sol.optimal());
  const auto levels = tagged_values(lp, sol, "storage_h2");
  REQUIRE(levels.size() == 25);
  CHECK(std::fabs(levels.front() - levels.back()) <= 1e-6);
}

TEST_CASE("every emitted LP is structurally valid") {
  const TechnologyCatalog catalog = make_catalog();
  const Scenario s = flat_scenario("y", 8, 0.5, 60.0);
  const LpProblem capex = build_capex(s, catalog, CostModel{}, ModificationState{});
  CHECK_NOTHROW(capex.validate());
  const LpProblem comp = build_feasibility(zero_design(catalog), s, catalog);
  CHECK_NOTHROW(comp.validate());
  for (const auto& row : capex.rows) CHECK(!row.terms.empty());
}
