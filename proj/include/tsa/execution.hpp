#pragma once

namespace tsa {

/// Execution policy for the data-parallel kernels (lag-sum products and the
/// model-search grid). The parallel variants split work across independent
/// output slots only and never reorder a reduction, so serial and parallel
/// runs produce bitwise-identical results; `parallel` silently degrades to
/// `serial` when the build has no OpenMP support.
enum class Execution { serial, parallel };

/// True when the library was compiled with OpenMP.
bool openmp_enabled() noexcept;

/// Number of threads a parallel region may use (1 without OpenMP).
int max_threads() noexcept;

}  // namespace tsa
