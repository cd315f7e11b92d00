#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "robustcap/critical_periods.hpp"
#include "robustcap/errors.hpp"
#include "testutil.hpp"

using namespace robustcap;
using namespace testutil;

namespace {

SupplyGapSeries series_from_hours(const std::set<std::size_t>& hours, std::size_t horizon,
                                  double level = 10.0) {
  SupplyGapSeries s;
  s.scenario_id = "y";
  s.gaps.assign(horizon, 0.0);
  for (std::size_t h : hours) s.gaps[h] = level;
  for (double g : s.gaps) s.total += g;
  return s;
}

}  // namespace

TEST_CASE("adjacent gap hours form one period") {
  const auto periods = cluster_gap_hours(series_from_hours({5, 6, 7}, 20), 1);
  REQUIRE(periods.size() == 1);
  CHECK(periods[0].hours.start == 5);
  CHECK(periods[0].hours.end == 7);
  CHECK(periods[0].scenario_id == "y");
}

TEST_CASE("a far-away hour starts its own period") {
  const auto periods = cluster_gap_hours(series_from_hours({5, 6, 7, 100}, 120), 1);
  REQUIRE(periods.size() == 2);
  CHECK(periods[0].hours.start == 5);
  CHECK(periods[0].hours.end == 7);
  CHECK(periods[1].hours.start == 100);
  CHECK(periods[1].hours.end == 100);
}

TEST_CASE("a distance equal to the join threshold merges") {
  const auto periods = cluster_gap_hours(series_from_hours({5, 8}, 20), 3);
  REQUIRE(periods.size() == 1);
  CHECK(periods[0].hours.start == 5);
  CHECK(periods[0].hours.end == 8);
}

TEST_CASE("empty gap series clusters to nothing") {
  const auto periods = cluster_gap_hours(series_from_hours({}, 20), 3);
  CHECK(periods.empty());
}

TEST_CASE("sub-threshold hours are ignored") {
  SupplyGapSeries s = series_from_hours({3}, 10);
  s.gaps[7] = 1e-9;  // below epsilon_hour
  const auto periods = cluster_gap_hours(s, 2);
  REQUIRE(periods.size() == 1);
  CHECK(periods[0].hours.end == 3);
}

TEST_CASE("clustering covers all gap hours with disjoint periods") {
  std::mt19937 rng(2025);
  std::uniform_int_distribution<int> horizon_pick(10, 200), join_pick(1, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const std::size_t H = horizon_pick(rng);
    const std::size_t join = join_pick(rng);
    SupplyGapSeries s;
    s.scenario_id = "y";
    s.gaps.assign(H, 0.0);
    std::set<std::size_t> hours;
    for (std::size_t t = 0; t < H; ++t)
      if (u(rng) < 0.2) {
        s.gaps[t] = 1.0 + u(rng);
        hours.insert(t);
      }
    const auto periods = cluster_gap_hours(s, join);
    CAPTURE(k);
    // Disjoint, sorted, and gap hours covered.
    for (std::size_t i = 1; i < periods.size(); ++i)
      CHECK(periods[i - 1].hours.end < periods[i].hours.start);
    std::size_t covered = 0;
    for (const auto& p : periods) {
      CHECK(p.hours.start <= p.hours.end);
      CHECK(hours.count(p.hours.start));  // no period starts on a quiet hour
      CHECK(hours.count(p.hours.end));
      for (std::size_t h : hours)
        if (h >= p.hours.start && h <= p.hours.end) ++covered;
    }
    CHECK(covered == hours.size());
    // Periods are separated by more than the join distance.
    for (std::size_t i = 1; i < periods.size(); ++i)
      CHECK(periods[i].hours.start - periods[i - 1].hours.end > join);
  }
}

TEST_CASE("clustering matches a reverse-scan reference implementation") {
  std::mt19937 rng(606);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    SupplyGapSeries s;
    s.scenario_id = "y";
    s.gaps.assign(60, 0.0);
    for (auto& g : s.gaps)
      if (u(rng) < 0.3) g = 1.0 + u(rng);
    const std::size_t join = 1 + k % 7;
    const auto periods = cluster_gap_hours(s, join);

    // Independent route: walk the hours backwards and merge the same way.
    std::vector<HourRange> reversed;
    for (std::size_t i = s.gaps.size(); i-- > 0;) {
      if (s.gaps[i] <= 1e-6) continue;
      if (!reversed.empty() && reversed.back().start - i <= join)
        reversed.back().start = i;
      else
        reversed.push_back({i, i});
    }
    std::reverse(reversed.begin(), reversed.end());
    REQUIRE(periods.size() == reversed.size());
    for (std::size_t i = 0; i < periods.size(); ++i) {
      CHECK(periods[i].hours.start == reversed[i].start);
      CHECK(periods[i].hours.end == reversed[i].end);
    }
  }
}

TEST_CASE("average hourly gap") {
  const TechnologyCatalog catalog = make_catalog();
  SUBCASE("supply equal to demand gives zero") {
    const Scenario s = make_scenario("y", {0.5, 0.5}, {0.0, 0.0}, {50.0, 50.0});
    const SystemDesign d = design_of(catalog, {{"wind", 100.0}}, "d");
    CHECK(average_hourly_gap(d, s, catalog, {0, 1}) == doctest::Approx(0.0));
  }
  SUBCASE("zero design sees the full demand as deficit") {
    const Scenario s = make_scenario("y", {0.5, 0.5}, {0.0, 0.0}, {100.0, 100.0});
    CHECK(average_hourly_gap(zero_design(catalog), s, catalog, {0, 1}) ==
          doctest::Approx(-100.0));
  }
  SUBCASE("surplus and deficit cancel symmetrically") {
    const Scenario s = make_scenario("y", {0.25, 0.75}, {0.0, 0.0}, {100.0, 100.0});
    const SystemDesign d = design_of(catalog, {{"wind", 200.0}}, "d");
    // supply [50, 150] against demand [100, 100]
    CHECK(average_hourly_gap(d, s, catalog, {0, 1}) == doctest::Approx(0.0));
  }
  SUBCASE("union of two equal-length periods averages their deltas") {
    const Scenario s =
        make_scenario("y", {0.1, 0.2, 0.6, 0.9}, {0.0, 0.0, 0.0, 0.0},
                      {100.0, 100.0, 100.0, 100.0});
    const SystemDesign d = design_of(catalog, {{"wind", 100.0}}, "d");
    const double left = average_hourly_gap(d, s, catalog, {0, 1});
    const double right = average_hourly_gap(d, s, catalog, {2, 3});
    const double both = average_hourly_gap(d, s, catalog, {0, 3});
    CHECK(both == doctest::Approx(0.5 * (left + right)).epsilon(1e-12));
  }
  SUBCASE("empty period is rejected") {
    const Scenario s = make_scenario("y", {0.5}, {0.0}, {10.0});
    CHECK_THROWS_AS(average_hourly_gap(zero_design(catalog), s, catalog, {1, 0}),
                    InvalidParameter);
  }
}

TEST_CASE("ranking: deficit periods first, most negative leading") {
  const TechnologyCatalog catalog = make_catalog();
  // Donor hours 0-1 deficit -5, hours 3-4 deficit -1.
  const Scenario donor = make_scenario(
      "don", {0.95, 0.95, 1.0, 0.99, 0.99, 1.0}, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
      std::vector<double>(6, 100.0));
  const Scenario ref = flat_scenario("ref", 6, 1.0, 100.0);
  const SystemDesign d = design_of(catalog, {{"wind", 100.0}}, "d");
  std::vector<CriticalPeriod> periods;
  periods.push_back({"don", {3, 4}, 0, 0, 0});
  periods.push_back({"don", {0, 1}, 0, 0, 0});
  const auto ranked = rank_candidate_periods(d, ref, donor, catalog, periods);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].hours.start == 0);
  CHECK(ranked[0].avg_gap == doctest::Approx(-5.0));
  CHECK(ranked[1].hours.start == 3);
  CHECK(ranked[1].avg_gap == doctest::Approx(-1.0));
}

TEST_CASE("ranking: without deficits the largest FLH reduction wins") {
  const TechnologyCatalog catalog = make_catalog();
  // Plenty of capacity, so no period has a negative average gap. The
  // reference is windy everywhere; the donor is calmer on hours 4-5 than
  // on hours 0-1.
  std::vector<double> ref_wind(8, 0.9), donor_wind(8, 0.9);
  donor_wind[0] = 0.7;
  donor_wind[1] = 0.7;  // reduction 0.2+0.2 = 0.4
  donor_wind[4] = 0.3;
  donor_wind[5] = 0.3;  // reduction 0.6+0.6 = 1.2
  const Scenario ref = make_scenario("ref", ref_wind, std::vector<double>(8, 0.0),
                                     std::vector<double>(8, 10.0));
  const Scenario donor = make_scenario("don", donor_wind, std::vector<double>(8, 0.0),
                                       std::vector<double>(8, 10.0));
  const SystemDesign d = design_of(catalog, {{"wind", 1000.0}}, "d");
  std::vector<CriticalPeriod> periods;
  periods.push_back({"don", {0, 1}, 0, 0, 0});
  periods.push_back({"don", {4, 5}, 0, 0, 0});
  const auto ranked = rank_candidate_periods(d, ref, donor, catalog, periods);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].hours.start == 4);
  CHECK(ranked[1].hours.start == 0);
}

TEST_CASE("ranking: ties break on the earlier start hour") {
  const TechnologyCatalog catalog = make_catalog();
  const Scenario both = flat_scenario("y", 8, 0.5, 10.0);
  const SystemDesign d = design_of(catalog, {{"wind", 1000.0}}, "d");
  std::vector<CriticalPeriod> periods;
  periods.push_back({"y", {4, 5}, 0, 0, 0});
  periods.push_back({"y", {0, 1}, 0, 0, 0});
  const auto ranked = rank_candidate_periods(d, both, both, catalog, periods);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].hours.start == 0);
  CHECK(ranked[1].hours.start == 4);
}
