#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace ringlab {

// Runs fn(i) for i in [0, count) on up to `threads` workers with static
// chunking. Callers must make fn(i) write only to slot i of preallocated
// storage (or accumulate order-independent integers) so results do not
// depend on the worker count. The first exception, if any, is rethrown.
template <typename Fn>
void parallel_for(long long count, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count < 2) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  int workers = static_cast<int>(std::min<long long>(threads, count));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  long long chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    long long lo = w * chunk;
    long long hi = std::min(count, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (long long i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace ringlab
