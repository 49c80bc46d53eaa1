#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace tsrl {

// Thread count used when a caller passes 0: the process default if set, else TSRL_THREADS,
// else hardware concurrency.
unsigned resolve_threads(unsigned requested);
// 0 clears the process default.
void set_default_threads(unsigned threads);

// Runs job(i) for i in [0, count) on up to `threads` workers. Results land at index i,
// so any later reduction over the vector is independent of scheduling.
template <class R>
std::vector<R> ordered_map(std::size_t count, unsigned threads, const std::function<R(std::size_t)>& job);

void run_indexed(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

template <class R>
std::vector<R> ordered_map(std::size_t count, unsigned threads, const std::function<R(std::size_t)>& job) {
  std::vector<R> out(count);
  run_indexed(count, threads, [&](std::size_t i) { out[i] = job(i); });
  return out;
}

}  // namespace tsrl
