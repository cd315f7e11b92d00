#include "robustcap/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "robustcap/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace robustcap {

ExecMode default_exec_mode() {
#ifdef _OPENMP
  return ExecMode::Parallel;
#else
  return ExecMode::Serial;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace detail {

void eliminate_rows_serial(double* tableau, std::size_t width, std::size_t num_rows,
                           std::size_t pivot_row, const double* col) {
  const double* prow = tableau + pivot_row * width;
  for (std::size_t i = 0; i < num_rows; ++i) {
    if (i == pivot_row) continue;
    const double f = col[i];
    if (f == 0.0) continue;
    double* row = tableau + i * width;
    for (std::size_t k = 0; k < width; ++k) row[k] -= f * prow[k];
  }
}

void eliminate_rows_parallel(double* tableau, std::size_t width, std::size_t num_rows,
                             std::size_t pivot_row, const double* col) {
#ifdef _OPENMP
  const double* prow = tableau + pivot_row * width;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(num_rows); ++i) {
    if (static_cast<std::size_t>(i) == pivot_row) continue;
    const double f = col[i];
    if (f == 0.0) continue;
    double* row = tableau + static_cast<std::size_t>(i) * width;
    for (std::size_t k = 0; k < width; ++k) row[k] -= f * prow[k];
  }
#else
  eliminate_rows_serial(tableau, width, num_rows, pivot_row, col);
#endif
}

}  // namespace detail

namespace {

enum VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree, kFixed };

constexpr double kPivTol = 1e-9;      // minimum pivot magnitude
constexpr double kRatioTie = 1e-12;   // ratio-test tie window
constexpr int kStallLimit = 600;      // non-improving pivots before Bland

struct Tableau {
  std::size_t m = 0;      // rows
  std::size_t ncols = 0;  // structural + logical + artificial
  std::vector<double> t;  // m x ncols, row-major
  std::vector<double> beta;
  std::vector<int> basis;
  std::vector<double> lo, up, xval;
  std::vector<std::uint8_t> state;
  std::vector<double> d;      // reduced costs for current phase
  std::vector<double> cost;   // current phase costs
  bool parallel = false;

  double* row(std::size_t i) { return t.data() + i * ncols; }
  const double* row(std::size_t i) const { return t.data() + i * ncols; }
};

double bound_start_value(double lo, double up) {
  if (std::isfinite(lo)) return lo;
  if (std::isfinite(up)) return up;
  return 0.0;
}

std::uint8_t bound_start_state(double lo, double up) {
  if (lo == up) return kFixed;
  if (std::isfinite(lo)) return kAtLower;
  if (std::isfinite(up)) return kAtUpper;
  return kFree;
}

// Rebuilds reduced costs d = c - c_B * T from scratch.
void rebuild_reduced_costs(Tableau& tb) {
  tb.d = tb.cost;
  for (std::size_t i = 0; i < tb.m; ++i) {
    const double cb = tb.cost[tb.basis[i]];
    if (cb == 0.0) continue;
    const double* r = tb.row(i);
    for (std::size_t k = 0; k < tb.ncols; ++k) tb.d[k] -= cb * r[k];
  }
  for (std::size_t i = 0; i < tb.m; ++i) tb.d[tb.basis[i]] = 0.0;
}

double phase_objective(const Tableau& tb) {
  double z = 0.0;
  for (std::size_t i = 0; i < tb.m; ++i) z += tb.cost[tb.basis[i]] * tb.beta[i];
  for (std::size_t j = 0; j < tb.ncols; ++j)
    if (tb.state[j] != kBasic && tb.cost[j] != 0.0) z += tb.cost[j] * tb.xval[j];
  return z;
}

// One simplex phase (minimization). Returns Optimal when no profitable
// column remains; Unbounded when the entering direction is unblocked.
SolveStatus run_phase(Tableau& tb, double cost_scale, std::uint64_t max_iter,
                      std::uint64_t& iter_count) {
  const double tol_d = 1e-9 * (1.0 + cost_scale);
  std::vector<double> col(tb.m);
  bool bland = false;
  int stall = 0;
  double last_z = phase_objective(tb);

  for (;;) {
    if (iter_count >= max_iter) return SolveStatus::IterationLimit;

    // Pricing.
    int enter = -1;
    int dir = 0;
    double best = tol_d;
    for (std::size_t j = 0; j < tb.ncols; ++j) {
      const std::uint8_t st = tb.state[j];
      if (st == kBasic || st == kFixed) continue;
      const double dj = tb.d[j];
      int cand_dir = 0;
      double score = 0.0;
      if (st == kAtLower && dj < -tol_d) {
        cand_dir = +1;
        score = -dj;
      } else if (st == kAtUpper && dj > tol_d) {
        cand_dir = -1;
        score = dj;
      } else if (st == kFree && std::fabs(dj) > tol_d) {
        cand_dir = dj < 0 ? +1 : -1;
        score = std::fabs(dj);
      }
      if (cand_dir == 0) continue;
      if (bland) {
        enter = static_cast<int>(j);
        dir = cand_dir;
        break;
      }
      if (score > best) {
        best = score;
        enter = static_cast<int>(j);
        dir = cand_dir;
      }
    }
    if (enter < 0) return SolveStatus::Optimal;

    // Ratio test. The entering variable moves by theta >= 0 in direction
    // dir; basic variable i changes at rate -T[i][enter]*dir.
    for (std::size_t i = 0; i < tb.m; ++i) col[i] = tb.row(i)[enter];

    double theta = kInf;
    int leave_row = -1;
    int leave_to = 0;  // kAtLower / kAtUpper for the leaving variable
    double leave_piv = 0.0;
    const double range = tb.up[enter] - tb.lo[enter];
    if (std::isfinite(range)) theta = range;  // bound flip

    auto consider = [&](std::size_t i, double cand, int to) {
      bool better;
      if (cand < theta - kRatioTie) {
        better = true;
      } else if (cand <= theta + kRatioTie) {
        if (bland)
          better = leave_row < 0 || tb.basis[i] < tb.basis[leave_row];
        else
          better = std::fabs(col[i]) > std::fabs(leave_piv);
      } else {
        better = false;
      }
      if (better) {
        theta = cand;
        leave_row = static_cast<int>(i);
        leave_to = to;
        leave_piv = col[i];
      }
    };
    for (std::size_t i = 0; i < tb.m; ++i) {
      const double w = col[i] * dir;
      if (w > kPivTol) {
        const double l = tb.lo[tb.basis[i]];
        if (l == -kInf) continue;
        consider(i, std::max((tb.beta[i] - l) / w, 0.0), kAtLower);
      } else if (w < -kPivTol) {
        const double u = tb.up[tb.basis[i]];
        if (u == kInf) continue;
        consider(i, std::max((tb.beta[i] - u) / w, 0.0), kAtUpper);
      }
    }

    if (theta == kInf) return SolveStatus::Unbounded;
    ++iter_count;

    const double delta = dir * theta;
    if (leave_row < 0) {
      // Bound flip: entering hits its opposite bound without a basis change.
      for (std::size_t i = 0; i < tb.m; ++i) tb.beta[i] -= col[i] * delta;
      tb.xval[enter] = (dir > 0) ? tb.up[enter] : tb.lo[enter];
      tb.state[enter] = (dir > 0) ? kAtUpper : kAtLower;
    } else {
      const double enter_val = tb.xval[enter] + delta;
      for (std::size_t i = 0; i < tb.m; ++i)
        if (static_cast<int>(i) != leave_row) tb.beta[i] -= col[i] * delta;

      const int leaving = tb.basis[leave_row];
      tb.state[leaving] = static_cast<std::uint8_t>(leave_to);
      tb.xval[leaving] = (leave_to == kAtLower) ? tb.lo[leaving] : tb.up[leaving];
      if (tb.lo[leaving] == tb.up[leaving]) tb.state[leaving] = kFixed;

      // Gauss step on the entering column.
      double* prow = tb.row(leave_row);
      const double piv = prow[enter];
      const double inv = 1.0 / piv;
      for (std::size_t k = 0; k < tb.ncols; ++k) prow[k] *= inv;
      prow[enter] = 1.0;  // exact

      if (tb.parallel)
        detail::eliminate_rows_parallel(tb.t.data(), tb.ncols, tb.m,
                                        static_cast<std::size_t>(leave_row), col.data());
      else
        detail::eliminate_rows_serial(tb.t.data(), tb.ncols, tb.m,
                                      static_cast<std::size_t>(leave_row), col.data());

      const double dj = tb.d[enter];
      if (dj != 0.0)
        for (std::size_t k = 0; k < tb.ncols; ++k) tb.d[k] -= dj * prow[k];
      tb.d[enter] = 0.0;

      tb.beta[leave_row] = enter_val;
      tb.basis[leave_row] = enter;
      tb.state[enter] = kBasic;
    }

    // Stall detection: switch to Bland's rule when the objective makes no
    // progress for a while, drop back once it moves again.
    const double z = phase_objective(tb);
    if (z < last_z - 1e-12 * (1.0 + std::fabs(last_z))) {
      last_z = z;
      stall = 0;
      bland = false;
    } else if (++stall > kStallLimit) {
      bland = true;
    }
  }
}

}  // namespace

Solution solve(const LpProblem& problem, const SolveOptions& opts) {
  problem.validate();
  const std::size_t n = problem.num_vars();
  const std::size_t m = problem.num_rows();

  Solution sol;
  sol.values.assign(n, 0.0);

  // Trivial case: no constraints, each variable sits at its cheapest bound.
  if (m == 0) {
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& v = problem.vars[j];
      const double c = problem.objective[j];
      double x;
      if (c > 0.0) {
        if (v.lower == -kInf) {
          sol.status = SolveStatus::Unbounded;
          return sol;
        }
        x = v.lower;
      } else if (c < 0.0) {
        if (v.upper == kInf) {
          sol.status = SolveStatus::Unbounded;
          return sol;
        }
        x = v.upper;
      } else {
        x = bound_start_value(v.lower, v.upper);
      }
      sol.values[j] = x;
      z += c * x;
    }
    sol.objective = z;
    sol.status = SolveStatus::Optimal;
    return sol;
  }

  Tableau tb;
  tb.m = m;
  tb.parallel = (opts.exec == ExecMode::Parallel);

  // Columns: structurals, then one logical per row, then artificials for
  // rows whose logical cannot absorb the initial residual.
  const std::size_t nlog = n + m;
  std::vector<double> residual(m);
  std::vector<int> art_of_row(m, -1);

  std::vector<double> start(n);
  for (std::size_t j = 0; j < n; ++j) start[j] = bound_start_value(problem.vars[j].lower, problem.vars[j].upper);
  double bscale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    double r = problem.rows[i].rhs;
    bscale = std::max(bscale, std::fabs(problem.rows[i].rhs));
    for (const auto& term : problem.rows[i].terms) r -= term.coef * start[term.var];
    residual[i] = r;
  }

  std::size_t nart = 0;
  auto logical_bounds = [](Sense s) -> std::pair<double, double> {
    switch (s) {
      case Sense::Le: return {0.0, kInf};
      case Sense::Ge: return {-kInf, 0.0};
      case Sense::Eq: return {0.0, 0.0};
    }
    return {0.0, 0.0};
  };
  for (std::size_t i = 0; i < m; ++i) {
    auto [lg, ug] = logical_bounds(problem.rows[i].sense);
    if (residual[i] < lg - 0.0 || residual[i] > ug + 0.0) art_of_row[i] = static_cast<int>(nart++);
  }

  tb.ncols = nlog + nart;
  tb.t.assign(m * tb.ncols, 0.0);
  tb.beta.assign(m, 0.0);
  tb.basis.assign(m, -1);
  tb.lo.assign(tb.ncols, 0.0);
  tb.up.assign(tb.ncols, 0.0);
  tb.xval.assign(tb.ncols, 0.0);
  tb.state.assign(tb.ncols, kAtLower);

  for (std::size_t j = 0; j < n; ++j) {
    tb.lo[j] = problem.vars[j].lower;
    tb.up[j] = problem.vars[j].upper;
    tb.xval[j] = start[j];
    tb.state[j] = bound_start_state(tb.lo[j], tb.up[j]);
  }
  for (std::size_t i = 0; i < m; ++i) {
    auto [lg, ug] = logical_bounds(problem.rows[i].sense);
    tb.lo[n + i] = lg;
    tb.up[n + i] = ug;
    tb.xval[n + i] = 0.0;
    tb.state[n + i] = bound_start_state(lg, ug);
    // Logical of a Ge row starts at its upper bound 0; of an Le row at
    // lower bound 0. Both are valid nonbasic positions.
    if (problem.rows[i].sense == Sense::Ge) tb.state[n + i] = kAtUpper;
    if (problem.rows[i].sense == Sense::Eq) tb.state[n + i] = kFixed;
  }

  // Fill tableau rows, applying the +-1 scaling that makes the starting
  // basis an identity.
  for (std::size_t i = 0; i < m; ++i) {
    const double sgn = (art_of_row[i] >= 0 && residual[i] < 0) ? -1.0 : 1.0;
    double* r = tb.row(i);
    for (const auto& term : problem.rows[i].terms) r[term.var] += sgn * term.coef;
    r[n + i] = sgn;
    if (art_of_row[i] >= 0) {
      const std::size_t ja = nlog + static_cast<std::size_t>(art_of_row[i]);
      r[ja] = 1.0;
      tb.lo[ja] = 0.0;
      tb.up[ja] = kInf;
      tb.basis[i] = static_cast<int>(ja);
      tb.beta[i] = sgn * residual[i];
      tb.state[ja] = kBasic;
    } else {
      tb.basis[i] = static_cast<int>(n + i);
      tb.beta[i] = residual[i];
      tb.state[n + i] = kBasic;
    }
  }

  std::uint64_t max_iter = opts.max_iterations;
  if (max_iter == 0) max_iter = 20000 + 200 * static_cast<std::uint64_t>(m + n);
  std::uint64_t iters = 0;

  // Phase 1: drive artificials to zero.
  if (nart > 0) {
    tb.cost.assign(tb.ncols, 0.0);
    for (std::size_t a = 0; a < nart; ++a) tb.cost[nlog + a] = 1.0;
    rebuild_reduced_costs(tb);
    const SolveStatus st = run_phase(tb, 1.0, max_iter, iters);
    if (st == SolveStatus::IterationLimit) {
      sol.status = st;
      sol.iterations = iters;
      return sol;
    }
    if (st == SolveStatus::Unbounded) {
      sol.status = SolveStatus::NumericalFailure;
      sol.iterations = iters;
      return sol;
    }
    const double infeas = phase_objective(tb);
    if (infeas > opts.tol.feasibility * (1.0 + bscale)) {
      sol.status = SolveStatus::Infeasible;
      sol.iterations = iters;
      return sol;
    }
    // Pin artificials at zero for phase 2.
    for (std::size_t a = 0; a < nart; ++a) {
      const std::size_t ja = nlog + a;
      tb.lo[ja] = 0.0;
      tb.up[ja] = 0.0;
      if (tb.state[ja] != kBasic) {
        tb.state[ja] = kFixed;
        tb.xval[ja] = 0.0;
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (tb.basis[i] >= static_cast<int>(nlog) && std::fabs(tb.beta[i]) < 1e-9) tb.beta[i] = 0.0;
    }
  }

  // Phase 2.
  tb.cost.assign(tb.ncols, 0.0);
  double cscale = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    tb.cost[j] = problem.objective[j];
    cscale = std::max(cscale, std::fabs(problem.objective[j]));
  }
  rebuild_reduced_costs(tb);
  const SolveStatus st = run_phase(tb, cscale, max_iter, iters);
  sol.iterations = iters;
  if (st != SolveStatus::Optimal) {
    sol.status = st;
    return sol;
  }

  // Extract primal values from the final basis.
  for (std::size_t j = 0; j < n; ++j)
    sol.values[j] = (tb.state[j] == kBasic) ? 0.0 : tb.xval[j];
  for (std::size_t i = 0; i < m; ++i) {
    const int bj = tb.basis[i];
    if (bj < static_cast<int>(n)) sol.values[bj] = tb.beta[i];
  }

  double z = 0.0;
  for (std::size_t j = 0; j < n; ++j) z += problem.objective[j] * sol.values[j];
  sol.objective = z;

  // Verify against the original data; never return a silently wrong answer.
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = problem.vars[j];
    const double tol = opts.tol.feasibility * (1.0 + std::fabs(sol.values[j]));
    if (sol.values[j] < v.lower - tol || sol.values[j] > v.upper + tol) {
      sol.status = SolveStatus::NumericalFailure;
      return sol;
    }
    sol.values[j] = std::min(std::max(sol.values[j], v.lower), v.upper);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = problem.rows[i];
    double lhs = 0.0;
    double scale = std::fabs(row.rhs);
    for (const auto& term : row.terms) {
      lhs += term.coef * sol.values[term.var];
      scale = std::max(scale, std::fabs(term.coef * sol.values[term.var]));
    }
    const double tol = opts.tol.feasibility * (1.0 + scale);
    const double diff = lhs - row.rhs;
    const bool ok = (row.sense == Sense::Le && diff <= tol) ||
                    (row.sense == Sense::Ge && diff >= -tol) ||
                    (row.sense == Sense::Eq && std::fabs(diff) <= tol);
    if (!ok) {
      sol.status = SolveStatus::NumericalFailure;
      return sol;
    }
  }

  sol.duals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) sol.duals[i] = -tb.d[n + i];
  sol.status = SolveStatus::Optimal;
  return sol;
}

}  // namespace robustcap
