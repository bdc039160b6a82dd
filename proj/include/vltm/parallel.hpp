#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace vltm {

/// Resolve a requested worker count: 0 means "use the hardware".
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Run fn(i) for i in [0, n). Each index is processed exactly once and fn
/// must only write state owned by index i, so results are bit-identical for
/// any worker count. Indices are dealt round-robin (worker w takes
/// w, w+k, w+2k, ...), keeping the assignment deterministic too.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const unsigned k = resolve_threads(threads);
  if (k <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(k);
  pool.reserve(k);
  for (unsigned w = 0; w < k; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += k) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace vltm
