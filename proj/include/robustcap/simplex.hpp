#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robustcap/lp.hpp"
#include "robustcap/parallel.hpp"

namespace robustcap {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

std::string to_string(SolveStatus status);

struct SolveTolerances {
  double feasibility = 1e-6;  ///< absolute, on constraint violation
  double optimality = 1e-6;   ///< relative gap
};

struct SolveOptions {
  SolveTolerances tol;
  ExecMode exec = default_exec_mode();
  std::uint64_t max_iterations = 0;  ///< 0 = automatic limit
};

struct Solution {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;
  std::vector<double> values;  ///< aligned with LpProblem::vars
  std::vector<double> duals;   ///< per row, only populated when optimal
  std::uint64_t iterations = 0;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

/// Solves the LP to optimality with a two-phase bounded-variable primal
/// simplex on a dense tableau. Deterministic: identical problems produce
/// identical solutions regardless of execution mode, because the parallel
/// kernel only distributes independent row updates.
Solution solve(const LpProblem& problem, const SolveOptions& opts = {});

namespace detail {
/// Rank-1 elimination sweep over tableau rows: rows[i] -= col[i] * pivot_row.
/// Serial reference and OpenMP variant; both give bitwise-equal results.
void eliminate_rows_serial(double* tableau, std::size_t width, std::size_t num_rows,
                           std::size_t pivot_row, const double* col);
void eliminate_rows_parallel(double* tableau, std::size_t width, std::size_t num_rows,
                             std::size_t pivot_row, const double* col);
}  // namespace detail

}  // namespace robustcap
