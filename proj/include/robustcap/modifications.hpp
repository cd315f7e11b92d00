#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "robustcap/lp.hpp"
#include "robustcap/types.hpp"

namespace robustcap {

/// A contiguous block of hours, both ends inclusive.
struct HourRange {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start + 1; }
  bool overlaps(const HourRange& other) const {
    return start <= other.end && other.start <= end;
  }
};

struct SplicedPeriod {
  HourRange hours;
  std::string donor_year;
  int iteration = 0;
};

struct SigmaVar {
  std::string key;  ///< "<year>:<start>-<end>", unique per period
  std::string year_id;
  HourRange hours;
};

/// A constraint over capacity variables, sigma variables and the initial
/// hydrogen storage level, stored symbolically and resolved against the
/// LP layout by the builder.
struct ExtraConstraint {
  std::string name;
  std::vector<std::pair<std::string, double>> capacity_terms;  ///< tech id -> coef
  std::vector<std::pair<std::string, double>> sigma_terms;     ///< sigma key -> coef
  double h2_initial_coef = 0.0;
  Sense sense = Sense::Ge;
  double rhs = 0.0;
};

/// Accumulated problem modifications carried across robustification
/// iterations and consumed by build_capex.
struct ModificationState {
  std::vector<double> demand_additions;  ///< MWh per hour, empty = none
  std::vector<SplicedPeriod> spliced_periods;
  std::vector<ExtraConstraint> extra_constraints;
  std::vector<SigmaVar> sigma_vars;  ///< kept sorted by key
  double h2_end_bonus = 0.0;         ///< MWh, raises end-of-year H2 level
  double alpha = 0.7;                ///< conversion-loss factor for the H2 cuts
  std::set<std::string> yearly_balance_years;  ///< years with a registered yearly cut

  bool has_sigma(const std::string& key) const;
  const SigmaVar* find_sigma(const std::string& key) const;
};

std::string period_key(const std::string& year_id, const HourRange& hours);

/// Adds supply-gap energy to the artificial demand profile. Without a
/// window each gap lands on its own hour; with one, each gap is spread
/// uniformly over [t-w, t+w] clipped to the horizon, redistributing the
/// clipped mass inside the window so the total is conserved.
ModificationState mod1_demand_increase(ModificationState state, const std::vector<double>& gaps,
                                       std::optional<int> smoothing_half_width = std::nullopt);

/// Replaces the reference scenario's capacity factors inside the period
/// by the donor's values at the same hours; demand is never spliced.
/// Rejects periods overlapping an earlier splice.
std::pair<ModificationState, Scenario> mod2_splice(ModificationState state,
                                                   const Scenario& reference,
                                                   const Scenario& donor, const HourRange& period,
                                                   int iteration);

/// Registers the yearly energy-balance cut for the given year:
/// loss_weight * annual potential supply - annual demand >= gap_total.
ModificationState mod3a_yearly_balance(ModificationState state, const Scenario& scenario,
                                       const TechnologyCatalog& catalog, double gap_total,
                                       double loss_weight);

/// Introduces the period's backup-energy variable sigma and the local
/// balance cut; idempotent for an already-registered period.
ModificationState mod3b_local_h2(ModificationState state, const Scenario& scenario,
                                 const TechnologyCatalog& catalog, const HourRange& period);

/// Registers the prefix hydrogen-stock cuts linking the initial storage
/// level, the net renewable balance before each period, and the sigma
/// variables of all periods up to it. Replaces the year's previous
/// prefix family so the cuts always reflect the full ordered period set.
ModificationState mod3_h2_prefix(ModificationState state, const Scenario& scenario,
                                 const TechnologyCatalog& catalog,
                                 const std::vector<HourRange>& ordered_periods);

/// Local supply requirement with CCGT credited at full load.
ModificationState mod4_local_capacity(ModificationState state, const Scenario& scenario,
                                      const TechnologyCatalog& catalog, const HourRange& period);

/// Raises the required end-of-year hydrogen level by the gap total.
ModificationState mod6_global_h2(ModificationState state, double gap_total);

}  // namespace robustcap
