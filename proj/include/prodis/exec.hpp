#pragma once

#include <cstddef>
#include <exception>
#include <utility>

namespace prodis {

// Replications are mutually independent by construction (counter-based
// streams keyed on the replication index), so they may run in any order.
// Parallel fans the loop out over OpenMP threads; Serial is the reference
// engine the parallel results are checked against.  Callers must write
// per-replication results into preassigned slots and reduce in index order
// afterwards, which keeps outputs bit-identical across engines and thread
// counts.
enum class ExecutionPolicy { Serial, Parallel };

template <typename Fn>
void for_each_replication(std::size_t count, ExecutionPolicy policy, Fn&& fn) {
  if (policy == ExecutionPolicy::Parallel) {
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (failure == nullptr) failure = std::current_exception();
      }
    }
    if (failure != nullptr) std::rethrow_exception(failure);
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
  }
}

}  // namespace prodis
