#pragma once

// Index-parallel loops whose results land in fixed slots, so the output does
// not depend on the thread count or scheduling.

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace dunkl {

enum class Execution { serial, parallel };

/// Number of worker threads used by Execution::parallel; 0 means the OpenMP default.
inline int& parallel_jobs() {
  static int jobs = 0;
  return jobs;
}

template <class F>
void for_each_index(std::size_t n, F&& body, Execution exec = Execution::parallel) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  // the failure with the lowest index wins, as it would in a serial run
  std::exception_ptr error;
  std::size_t error_index = n;
  std::mutex error_mutex;
  const int jobs = parallel_jobs() > 0 ? parallel_jobs() : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (static_cast<std::size_t>(i) < error_index) {
        error = std::current_exception();
        error_index = static_cast<std::size_t>(i);
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace dunkl
