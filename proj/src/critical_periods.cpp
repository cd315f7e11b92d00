#include "robustcap/critical_periods.hpp"

#include <algorithm>
#include <cmath>

#include "robustcap/errors.hpp"

namespace robustcap {

std::vector<CriticalPeriod> cluster_gap_hours(const SupplyGapSeries& gaps,
                                              std::size_t max_join_distance, double epsilon_hour,
                                              int iteration_found) {
  std::vector<std::size_t> hours;
  for (std::size_t t = 0; t < gaps.gaps.size(); ++t)
    if (gaps.gaps[t] > epsilon_hour) hours.push_back(t);

  std::vector<CriticalPeriod> periods;
  if (hours.empty()) return periods;

  CriticalPeriod current;
  current.scenario_id = gaps.scenario_id;
  current.hours = {hours[0], hours[0]};
  current.iteration_found = iteration_found;
  for (std::size_t k = 1; k < hours.size(); ++k) {
    if (hours[k] - current.hours.end <= max_join_distance) {
      current.hours.end = hours[k];
    } else {
      periods.push_back(current);
      current.hours = {hours[k], hours[k]};
    }
  }
  periods.push_back(current);
  return periods;
}

double average_hourly_gap(const SystemDesign& design, const Scenario& scenario,
                          const TechnologyCatalog& catalog, const HourRange& period) {
  if (period.start > period.end || period.end >= scenario.horizon)
    throw InvalidParameter("average_hourly_gap: period outside horizon");
  double sum = 0.0;
  for (std::size_t t = period.start; t <= period.end; ++t)
    sum += potential_supply(design, scenario, catalog, t) - scenario.demand[t];
  return sum / static_cast<double>(period.length());
}

double flh_sum(const Scenario& scenario, const TechnologyCatalog& catalog,
               const HourRange& period) {
  if (period.start > period.end || period.end >= scenario.horizon)
    throw InvalidParameter("flh_sum: period outside horizon");
  double sum = 0.0;
  for (const auto& id : catalog.supply_ids()) {
    const auto& series = scenario.capacity_factors.at(id);
    for (std::size_t t = period.start; t <= period.end; ++t) sum += series[t];
  }
  return sum;
}

std::vector<CriticalPeriod> rank_candidate_periods(const SystemDesign& design,
                                                   const Scenario& reference,
                                                   const Scenario& donor,
                                                   const TechnologyCatalog& catalog,
                                                   std::vector<CriticalPeriod> periods) {
  struct Scored {
    CriticalPeriod period;
    double delta;
    double flh_reduction;
  };
  std::vector<Scored> scored;
  scored.reserve(periods.size());
  for (auto& p : periods) {
    Scored s;
    s.delta = average_hourly_gap(design, donor, catalog, p.hours);
    const double donor_flh = flh_sum(donor, catalog, p.hours);
    // Splicing replaces the reference window by the donor's data, so the
    // attractive candidates are the ones that pull full-load hours down.
    s.flh_reduction = flh_sum(reference, catalog, p.hours) - donor_flh;
    p.avg_gap = s.delta;
    p.flh_sum = donor_flh;
    s.period = p;
    scored.push_back(std::move(s));
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    const bool a_neg = a.delta < 0.0;
    const bool b_neg = b.delta < 0.0;
    if (a_neg != b_neg) return a_neg;
    if (a_neg) {
      if (a.delta != b.delta) return a.delta < b.delta;
    } else {
      if (a.flh_reduction != b.flh_reduction) return a.flh_reduction > b.flh_reduction;
    }
    if (a.period.scenario_id != b.period.scenario_id)
      return a.period.scenario_id < b.period.scenario_id;
    return a.period.hours.start < b.period.hours.start;
  });
  std::vector<CriticalPeriod> out;
  out.reserve(scored.size());
  for (auto& s : scored) out.push_back(std::move(s.period));
  return out;
}

}  // namespace robustcap
