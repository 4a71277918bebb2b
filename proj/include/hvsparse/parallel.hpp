#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace hvsparse {

// Runs fn(i) for i in [0, count), across OpenMP threads when `parallel` is set.
// Exceptions are captured per task and the lowest-index one is rethrown after
// the loop, so failure reporting does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, bool parallel, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace hvsparse
