#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace shclust::par {

namespace detail {
inline std::atomic<int>& thread_cap() {
  static std::atomic<int> cap{0};  // 0 = hardware concurrency
  return cap;
}
inline thread_local int nesting_depth = 0;
}  // namespace detail

inline int max_threads() {
  const int cap = detail::thread_cap().load();
  if (cap > 0) return cap;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Caps worker count globally (0 restores the hardware default). The
/// acceptance timing checks set this to 1 so measured scaling reflects work,
/// not scheduling.
inline void set_max_threads(int cap) { detail::thread_cap().store(cap); }

/// Runs fn(i) for i in [0, count). Iterations must be independent; outputs
/// written by index stay deterministic regardless of scheduling. Nested
/// calls run serially so outer loops own the workers.
template <class F>
void parallel_for(std::size_t count, F&& fn) {
  const int workers =
      detail::nesting_depth > 0 ? 1 : std::min<std::size_t>(max_threads(), count);
  if (workers <= 1) {
    ++detail::nesting_depth;
    for (std::size_t i = 0; i < count; ++i) fn(i);
    --detail::nesting_depth;
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto body = [&]() {
    ++detail::nesting_depth;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) break;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        break;
      }
    }
    --detail::nesting_depth;
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace shclust::par
