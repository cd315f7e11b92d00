#pragma once

#include <string>
#include <vector>

#include "robustcap/feasibility.hpp"
#include "robustcap/modifications.hpp"
#include "robustcap/types.hpp"

namespace robustcap {

/// A contiguous block of supply-gap hours, scored for period selection.
struct CriticalPeriod {
  std::string scenario_id;
  HourRange hours;
  double avg_gap = 0.0;  ///< mean full-load supply minus demand; negative = deficit
  double flh_sum = 0.0;  ///< capacity-factor sum over supply technologies in the period
  int iteration_found = 0;
};

/// Single-linkage agglomeration along the time axis: hours with a gap
/// above epsilon_hour merge into one period while consecutive gap hours
/// are at most max_join_distance apart. Periods come out sorted by start
/// hour, pairwise disjoint, and jointly covering every gap hour.
std::vector<CriticalPeriod> cluster_gap_hours(const SupplyGapSeries& gaps,
                                              std::size_t max_join_distance,
                                              double epsilon_hour = 1e-6,
                                              int iteration_found = 0);

/// Mean over the period of potential_supply(t) - demand(t).
double average_hourly_gap(const SystemDesign& design, const Scenario& scenario,
                          const TechnologyCatalog& catalog, const HourRange& period);

/// Capacity-factor sum over all supply technologies and period hours.
double flh_sum(const Scenario& scenario, const TechnologyCatalog& catalog,
               const HourRange& period);

/// Orders candidate periods for splicing: deficit periods (negative
/// average gap on the donor data) first, most negative leading; the rest
/// by how much splicing would lower the reference window's full-load
/// hours, largest reduction first. Ties break on (scenario id, start).
/// avg_gap and flh_sum of the returned periods are filled against the
/// donor data.
std::vector<CriticalPeriod> rank_candidate_periods(const SystemDesign& design,
                                                   const Scenario& reference,
                                                   const Scenario& donor,
                                                   const TechnologyCatalog& catalog,
                                                   std::vector<CriticalPeriod> periods);

}  // namespace robustcap
