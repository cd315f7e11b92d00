#pragma once

#include <cstddef>

namespace robustcap {

/// Execution mode for the data-parallel kernels. Serial and Parallel
/// produce bitwise-identical results: the parallel loops only split
/// elementwise-independent work across threads.
enum class ExecMode { Serial, Parallel };

/// Parallel when compiled with OpenMP, Serial otherwise.
ExecMode default_exec_mode();

int max_threads();

}  // namespace robustcap
