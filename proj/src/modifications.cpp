#include "robustcap/modifications.hpp"

#include <algorithm>
#include <cmath>

#include "robustcap/errors.hpp"

namespace robustcap {

namespace {

void check_gaps(const std::vector<double>& gaps) {
  for (std::size_t t = 0; t < gaps.size(); ++t)
    if (!(gaps[t] >= 0.0) || !std::isfinite(gaps[t]))
      throw ModificationError("gap at hour " + std::to_string(t) + " must be >= 0");
}

std::vector<double> demand_with_additions(const Scenario& scenario,
                                          const ModificationState& state) {
  std::vector<double> d = scenario.demand;
  if (!state.demand_additions.empty()) {
    if (state.demand_additions.size() != d.size())
      throw ModificationError("demand additions length does not match scenario horizon");
    for (std::size_t t = 0; t < d.size(); ++t) d[t] += state.demand_additions[t];
  }
  return d;
}

void check_period(const HourRange& period, std::size_t horizon) {
  if (period.start > period.end)
    throw ModificationError("period start exceeds period end");
  if (period.end >= horizon)
    throw ModificationError("period extends past the horizon");
}

void erase_constraints_with_prefix(ModificationState& state, const std::string& prefix) {
  auto& v = state.extra_constraints;
  v.erase(std::remove_if(v.begin(), v.end(),
                         [&](const ExtraConstraint& c) {
                           return c.name.compare(0, prefix.size(), prefix) == 0;
                         }),
          v.end());
}

bool has_constraint(const ModificationState& state, const std::string& name) {
  return std::any_of(state.extra_constraints.begin(), state.extra_constraints.end(),
                     [&](const ExtraConstraint& c) { return c.name == name; });
}

}  // namespace

bool ModificationState::has_sigma(const std::string& key) const {
  return find_sigma(key) != nullptr;
}

const SigmaVar* ModificationState::find_sigma(const std::string& key) const {
  for (const auto& sv : sigma_vars)
    if (sv.key == key) return &sv;
  return nullptr;
}

std::string period_key(const std::string& year_id, const HourRange& hours) {
  return year_id + ":" + std::to_string(hours.start) + "-" + std::to_string(hours.end);
}

ModificationState mod1_demand_increase(ModificationState state, const std::vector<double>& gaps,
                                       std::optional<int> smoothing_half_width) {
  check_gaps(gaps);
  const std::size_t H = gaps.size();
  if (state.demand_additions.empty()) state.demand_additions.assign(H, 0.0);
  if (state.demand_additions.size() != H)
    throw ModificationError("gaps length does not match accumulated demand additions");

  if (!smoothing_half_width) {
    for (std::size_t t = 0; t < H; ++t) state.demand_additions[t] += gaps[t];
    return state;
  }
  const int w = *smoothing_half_width;
  if (w < 0) throw ModificationError("smoothing window must be >= 0");
  for (std::size_t t = 0; t < H; ++t) {
    if (gaps[t] == 0.0) continue;
    const std::size_t lo = t >= static_cast<std::size_t>(w) ? t - w : 0;
    const std::size_t hi = std::min(H - 1, t + static_cast<std::size_t>(w));
    const double share = gaps[t] / static_cast<double>(hi - lo + 1);
    for (std::size_t i = lo; i <= hi; ++i) state.demand_additions[i] += share;
  }
  return state;
}

std::pair<ModificationState, Scenario> mod2_splice(ModificationState state,
                                                   const Scenario& reference,
                                                   const Scenario& donor, const HourRange& period,
                                                   int iteration) {
  if (donor.horizon != reference.horizon)
    throw ModificationError("splice: donor and reference horizons differ");
  check_period(period, reference.horizon);
  for (const auto& prior : state.spliced_periods)
    if (prior.hours.overlaps(period))
      throw ModificationError("splice overlaps an earlier splice at hours " +
                              std::to_string(prior.hours.start) + "-" +
                              std::to_string(prior.hours.end));
  Scenario synthetic = reference;
  for (auto& [id, series] : synthetic.capacity_factors) {
    auto it = donor.capacity_factors.find(id);
    if (it == donor.capacity_factors.end())
      throw ModificationError("splice: donor lacks capacity factors for " + id);
    for (std::size_t t = period.start; t <= period.end; ++t) series[t] = it->second[t];
  }
  state.spliced_periods.push_back({period, donor.year_id, iteration});
  return {std::move(state), std::move(synthetic)};
}

ModificationState mod3a_yearly_balance(ModificationState state, const Scenario& scenario,
                                       const TechnologyCatalog& catalog, double gap_total,
                                       double loss_weight) {
  if (!(gap_total >= 0.0)) throw ModificationError("gap_total must be >= 0");
  if (!(loss_weight > 0.0)) throw ModificationError("loss_weight must be > 0");
  const std::vector<double> dem = demand_with_additions(scenario, state);

  ExtraConstraint c;
  c.name = "mod3a_" + scenario.year_id;
  for (const auto& id : catalog.supply_ids()) {
    const auto& series = scenario.capacity_factors.at(id);
    double sum = 0.0;
    for (double a : series) sum += a;
    c.capacity_terms.emplace_back(id, loss_weight * sum);
  }
  double total_demand = 0.0;
  for (double d : dem) total_demand += d;
  c.sense = Sense::Ge;
  c.rhs = gap_total + total_demand;

  erase_constraints_with_prefix(state, c.name);
  state.extra_constraints.push_back(std::move(c));
  state.yearly_balance_years.insert(scenario.year_id);
  return state;
}

ModificationState mod3b_local_h2(ModificationState state, const Scenario& scenario,
                                 const TechnologyCatalog& catalog, const HourRange& period) {
  check_period(period, scenario.horizon);
  const std::string key = period_key(scenario.year_id, period);
  if (state.has_sigma(key)) return state;  // already registered
  const auto turbine = catalog.discharger_id();
  if (!turbine)
    throw ModificationError("mod3b requires an H2->electricity conversion technology");
  const double eff_out = *catalog.at(*turbine).conversion_out_eff;
  const std::vector<double> dem = demand_with_additions(scenario, state);

  ExtraConstraint local;
  local.name = "mod3b_" + key;
  double demand_sum = 0.0;
  for (std::size_t t = period.start; t <= period.end; ++t) demand_sum += dem[t];
  for (const auto& id : catalog.supply_ids()) {
    const auto& series = scenario.capacity_factors.at(id);
    double sum = 0.0;
    for (std::size_t t = period.start; t <= period.end; ++t) sum += series[t];
    if (sum != 0.0) local.capacity_terms.emplace_back(id, sum);
  }
  local.sigma_terms.emplace_back(key, 1.0);
  local.sense = Sense::Ge;
  local.rhs = demand_sum;

  ExtraConstraint cap;
  cap.name = "mod3b_cap_" + key;
  cap.sigma_terms.emplace_back(key, 1.0);
  cap.capacity_terms.emplace_back(*turbine,
                                  -static_cast<double>(period.length()) * eff_out);
  cap.sense = Sense::Le;
  cap.rhs = 0.0;

  SigmaVar sv{key, scenario.year_id, period};
  auto pos = std::lower_bound(state.sigma_vars.begin(), state.sigma_vars.end(), sv,
                              [](const SigmaVar& a, const SigmaVar& b) { return a.key < b.key; });
  state.sigma_vars.insert(pos, sv);
  state.extra_constraints.push_back(std::move(local));
  state.extra_constraints.push_back(std::move(cap));
  return state;
}

ModificationState mod3_h2_prefix(ModificationState state, const Scenario& scenario,
                                 const TechnologyCatalog& catalog,
                                 const std::vector<HourRange>& ordered_periods) {
  for (std::size_t q = 0; q < ordered_periods.size(); ++q) {
    check_period(ordered_periods[q], scenario.horizon);
    if (q > 0 && ordered_periods[q - 1].end >= ordered_periods[q].start)
      throw ModificationError("mod3 periods must be ordered and disjoint");
    if (!state.has_sigma(period_key(scenario.year_id, ordered_periods[q])))
      throw ModificationError("mod3 period lacks a sigma variable: " +
                              period_key(scenario.year_id, ordered_periods[q]));
  }
  const std::vector<double> dem = demand_with_additions(scenario, state);
  erase_constraints_with_prefix(state, "mod3pfx_" + scenario.year_id + "_");

  for (std::size_t q = 0; q < ordered_periods.size(); ++q) {
    const HourRange& period = ordered_periods[q];
    ExtraConstraint c;
    c.name = "mod3pfx_" + scenario.year_id + "_" + std::to_string(q);
    c.h2_initial_coef = 1.0;
    for (const auto& id : catalog.supply_ids()) {
      const auto& series = scenario.capacity_factors.at(id);
      double sum = 0.0;
      for (std::size_t t = 0; t < period.start; ++t) sum += series[t];
      if (sum != 0.0) c.capacity_terms.emplace_back(id, state.alpha * sum);
    }
    for (std::size_t p = 0; p <= q; ++p)
      c.sigma_terms.emplace_back(period_key(scenario.year_id, ordered_periods[p]), -1.0);
    double demand_sum = 0.0;
    for (std::size_t t = 0; t < period.start; ++t) demand_sum += dem[t];
    c.sense = Sense::Ge;
    c.rhs = state.alpha * demand_sum;
    state.extra_constraints.push_back(std::move(c));
  }
  return state;
}

ModificationState mod4_local_capacity(ModificationState state, const Scenario& scenario,
                                      const TechnologyCatalog& catalog, const HourRange& period) {
  check_period(period, scenario.horizon);
  const std::string name = "mod4_" + period_key(scenario.year_id, period);
  if (has_constraint(state, name)) return state;
  const std::vector<double> dem = demand_with_additions(scenario, state);

  ExtraConstraint c;
  c.name = name;
  for (const auto& id : catalog.supply_ids()) {
    const auto& series = scenario.capacity_factors.at(id);
    double sum = 0.0;
    for (std::size_t t = period.start; t <= period.end; ++t) sum += series[t];
    if (sum != 0.0) c.capacity_terms.emplace_back(id, sum);
  }
  if (auto turbine = catalog.discharger_id()) {
    c.capacity_terms.emplace_back(
        *turbine, static_cast<double>(period.length()) * *catalog.at(*turbine).conversion_out_eff);
  }
  double demand_sum = 0.0;
  for (std::size_t t = period.start; t <= period.end; ++t) demand_sum += dem[t];
  c.sense = Sense::Ge;
  c.rhs = demand_sum;
  state.extra_constraints.push_back(std::move(c));
  return state;
}

ModificationState mod6_global_h2(ModificationState state, double gap_total) {
  if (!(gap_total >= 0.0)) throw ModificationError("gap_total must be >= 0");
  state.h2_end_bonus += gap_total;
  return state;
}

}  // namespace robustcap
