#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace zd {

/// Worker count from the ZD_THREADS environment variable, else the number of
/// hardware threads (at least 1). Throws InvalidArgument for a malformed
/// ZD_THREADS value.
std::size_t default_thread_count();

/// Runs body(i) for every i in [0, count) on up to `threads` workers. Indices
/// are claimed dynamically. If any call throws, the exception from the
/// lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

/// Results gathered by index, so the output order never depends on
/// scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, std::size_t threads, Fn&& fn) {
  std::vector<std::optional<T>> slots(count);
  parallel_for(count, threads, [&](std::size_t i) { slots[i].emplace(fn(i)); });
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace zd
