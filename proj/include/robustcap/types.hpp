#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace robustcap {

// Units used throughout: power MW, energy MWh, money EUR, hourly resolution.
// Capacity is MW for supply/conversion technologies and MWh for storage.

enum class TechKind { Supply, Storage, Conversion };
enum class StorageMedium { Electricity, Hydrogen };

struct Technology {
  TechKind kind = TechKind::Supply;
  double capex = 0.0;      ///< EUR per capacity unit
  double opex_fix = 0.0;   ///< EUR per capacity unit per year
  int lifetime_years = 1;
  double max_capacity = 0.0;
  std::optional<StorageMedium> medium;       ///< storage technologies only
  std::optional<double> conversion_in_eff;   ///< electricity -> H2 (electrolyser)
  std::optional<double> conversion_out_eff;  ///< H2 -> electricity (CCGT)
  double self_discharge_per_hour = 0.0;
};

/// Per-technology techno-economic parameters and capacity limits.
/// Entries are kept ordered by id so every downstream artifact
/// (LP layouts, reports) is deterministic.
class TechnologyCatalog {
 public:
  void add(const std::string& id, const Technology& tech);

  bool has(const std::string& id) const { return entries_.count(id) != 0; }
  const Technology& at(const std::string& id) const;
  const std::map<std::string, Technology>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::vector<std::string> supply_ids() const;
  std::optional<std::string> storage_id(StorageMedium medium) const;
  /// Conversion technology consuming electricity (electrolyser), if any.
  std::optional<std::string> charger_id() const;
  /// Conversion technology producing electricity (CCGT), if any.
  std::optional<std::string> discharger_id() const;

 private:
  std::map<std::string, Technology> entries_;
};

/// One year of hourly capacity factors per supply technology plus demand.
struct Scenario {
  std::string year_id;
  std::size_t horizon = 0;  ///< number of hours
  std::map<std::string, std::vector<double>> capacity_factors;
  std::vector<double> demand;  ///< MW per hour

  /// Checks lengths, factor ranges and coverage of the catalog's
  /// supply technologies. Throws SchemaError.
  void validate(const TechnologyCatalog& catalog) const;
};

/// Installed capacity per technology.
struct SystemDesign {
  std::map<std::string, double> capacities;
  std::string source;  ///< which scenario/algorithm produced it

  /// Throws InvalidDesign if a capacity is negative, exceeds its limit,
  /// or a catalog technology is missing.
  void validate(const TechnologyCatalog& catalog) const;
};

enum class Annualization { StraightLine, Annuity };

struct CostModel {
  Annualization annualization = Annualization::StraightLine;
  double discount_rate = 0.0;         ///< per year, used by annuity
  double shedding_penalty_m = 1e6;    ///< EUR per MWh of shed load

  void validate() const;  // throws InvalidParameter
};

}  // namespace robustcap
