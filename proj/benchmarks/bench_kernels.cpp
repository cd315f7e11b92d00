// Compares the serial reference implementations against the OpenMP
// kernels: the tableau elimination sweep, a full capacity-expansion
// solve, and the feasibility sweep across scenarios. The two modes must
// agree bitwise; the tables report wall time and speedup.
//
// Usage: bench_kernels [--quick]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "robustcap/feasibility.hpp"
#include "robustcap/model.hpp"
#include "robustcap/robustify.hpp"
#include "robustcap/simplex.hpp"

using namespace robustcap;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TechnologyCatalog bench_catalog() {
  TechnologyCatalog c;
  Technology wind;
  wind.kind = TechKind::Supply;
  wind.capex = 1.0e6;
  wind.opex_fix = 25000.0;
  wind.lifetime_years = 20;
  wind.max_capacity = 2000.0;
  c.add("wind", wind);
  Technology pv = wind;
  pv.capex = 474000.0;
  pv.opex_fix = 10000.0;
  c.add("pv", pv);
  Technology bat;
  bat.kind = TechKind::Storage;
  bat.medium = StorageMedium::Electricity;
  bat.capex = 131000.0;
  bat.opex_fix = 3300.0;
  bat.lifetime_years = 15;
  bat.max_capacity = 500.0;
  c.add("battery", bat);
  Technology cav;
  cav.kind = TechKind::Storage;
  cav.medium = StorageMedium::Hydrogen;
  cav.capex = 700.0;
  cav.opex_fix = 10.0;
  cav.lifetime_years = 40;
  cav.max_capacity = 2.0e5;
  c.add("cavern", cav);
  Technology elz;
  elz.kind = TechKind::Conversion;
  elz.conversion_in_eff = 0.7;
  elz.capex = 350000.0;
  elz.opex_fix = 11000.0;
  elz.lifetime_years = 10;
  elz.max_capacity = 2000.0;
  c.add("electrolyser", elz);
  Technology gt;
  gt.kind = TechKind::Conversion;
  gt.conversion_out_eff = 0.6;
  gt.capex = 760000.0;
  gt.opex_fix = 23000.0;
  gt.lifetime_years = 20;
  gt.max_capacity = 2000.0;
  c.add("ccgt", gt);
  return c;
}

Scenario bench_scenario(const std::string& id, std::size_t hours, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> wobble(-0.08, 0.08);
  Scenario s;
  s.year_id = id;
  s.horizon = hours;
  s.demand.assign(hours, 0.0);
  auto& wind = s.capacity_factors["wind"];
  auto& pv = s.capacity_factors["pv"];
  wind.assign(hours, 0.0);
  pv.assign(hours, 0.0);
  for (std::size_t t = 0; t < hours; ++t) {
    const std::size_t h = t % 24;
    const bool day = h >= 8 && h < 20;
    s.demand[t] = day ? 140.0 : 60.0;
    wind[t] = std::clamp(0.42 + wobble(rng), 0.0, 1.0);
    pv[t] = day ? 0.5 : 0.0;
  }
  // one calm spell per scenario, placed by the seed
  const std::size_t start = 24 + (seed * 7) % (hours / 2);
  for (std::size_t t = start; t < start + 18 && t < hours; ++t) wind[t] = 0.04;
  return s;
}

void bench_elimination(bool quick) {
  const std::size_t rows = quick ? 400 : 1500;
  const std::size_t width = quick ? 900 : 3600;
  const int sweeps = quick ? 40 : 120;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> base(rows * width), col(rows);
  for (auto& v : base) v = u(rng);
  for (auto& v : col) v = u(rng);

  std::vector<double> a = base;
  auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < sweeps; ++k)
    detail::eliminate_rows_serial(a.data(), width, rows, k % rows, col.data());
  const double serial = seconds_since(t0);

  std::vector<double> b = base;
  t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < sweeps; ++k)
    detail::eliminate_rows_parallel(b.data(), width, rows, k % rows, col.data());
  const double parallel = seconds_since(t0);

  std::printf("elimination  %4zux%-5zu x%-3d   serial %7.3f s   openmp %7.3f s   x%.2f   %s\n",
              rows, width, sweeps, serial, parallel, serial / parallel,
              a == b ? "bitwise equal" : "MISMATCH");
}

void bench_solve(bool quick) {
  const std::size_t hours = quick ? 96 : 240;
  const TechnologyCatalog catalog = bench_catalog();
  const Scenario scen = bench_scenario("bench", hours, 1);
  const LpProblem lp = build_capex(scen, catalog, CostModel{}, ModificationState{});

  SolveOptions serial_opts;
  serial_opts.exec = ExecMode::Serial;
  auto t0 = std::chrono::steady_clock::now();
  const Solution ser = solve(lp, serial_opts);
  const double serial = seconds_since(t0);

  SolveOptions parallel_opts;
  parallel_opts.exec = ExecMode::Parallel;
  t0 = std::chrono::steady_clock::now();
  const Solution par = solve(lp, parallel_opts);
  const double parallel = seconds_since(t0);

  std::printf("capex solve  %4zu h (%zu rows)   serial %7.3f s   openmp %7.3f s   x%.2f   %s\n",
              hours, lp.num_rows(), serial, parallel, serial / parallel,
              (ser.optimal() && par.optimal() && ser.values == par.values) ? "bitwise equal"
                                                                           : "MISMATCH");
}

void bench_sweep(bool quick) {
  const std::size_t hours = quick ? 96 : 168;
  const std::size_t years = quick ? 4 : 8;
  const TechnologyCatalog catalog = bench_catalog();
  std::vector<Scenario> scenarios;
  for (std::size_t k = 0; k < years; ++k)
    scenarios.push_back(bench_scenario("y" + std::to_string(k), hours, 100 + k));
  for (auto& s : scenarios) s.demand = scenarios.front().demand;

  const SingleYearResult single = solve_single_year(scenarios.front(), catalog, CostModel{});

  SolveOptions serial_opts;
  serial_opts.exec = ExecMode::Serial;
  auto t0 = std::chrono::steady_clock::now();
  const RobustnessReport ser =
      is_robust(single.design, scenarios, catalog, 10.0, serial_opts);
  const double serial = seconds_since(t0);

  SolveOptions parallel_opts;
  parallel_opts.exec = ExecMode::Parallel;
  t0 = std::chrono::steady_clock::now();
  const RobustnessReport par =
      is_robust(single.design, scenarios, catalog, 10.0, parallel_opts);
  const double parallel = seconds_since(t0);

  bool equal = ser.per_year.size() == par.per_year.size();
  for (const auto& [id, series] : ser.per_year)
    equal = equal && par.per_year.count(id) && par.per_year.at(id).gaps == series.gaps;
  std::printf("uc sweep     %4zu h x %zu years     serial %7.3f s   openmp %7.3f s   x%.2f   %s\n",
              hours, years, serial, parallel, serial / parallel,
              equal ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  std::printf("robustcap kernel benchmark (%s, %d thread(s))\n", quick ? "quick" : "full",
              max_threads());
  bench_elimination(quick);
  bench_solve(quick);
  bench_sweep(quick);
  return 0;
}
