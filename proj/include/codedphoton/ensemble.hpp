#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace codedphoton {

/// Number of workers to use when the caller passes 0.
inline unsigned default_workers() { return std::max(1U, std::thread::hardware_concurrency()); }

/// Evaluates fn(i) for i in [0, trials) on up to `workers` threads and returns
/// the results in trial order. Any reduction over the returned vector is then
/// independent of the worker count.
template <class Fn>
auto run_trials(std::size_t trials, unsigned workers, Fn&& fn) {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(trials);
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(trials, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < trials; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < trials; i += workers) out[i] = fn(i);
    });
  }
  pool.clear();
  return out;
}

}  // namespace codedphoton
