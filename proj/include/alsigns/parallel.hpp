#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace alsigns {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Index i goes to
// worker i % workers, so callers that write results into slot i get the same
// output regardless of the worker count. The first exception is rethrown.
template <class Fn> void parallel_for(std::size_t n, int workers, Fn &&fn) {
  std::size_t w = static_cast<std::size_t>(std::max(1, workers));
  w = std::min(w, std::max<std::size_t>(n, 1));
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += w) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto &th : pool) th.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

int default_workers();

} // namespace alsigns
