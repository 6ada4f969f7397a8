#pragma once

#include <cstddef>
#include <functional>

namespace tcs {

/// Worker count used by every parallel section. 0 restores the default
/// (hardware concurrency).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Work is handed out by index, so any result
/// written to slot i is independent of scheduling. After all workers join, the
/// exception from the lowest failing index (if any) is rethrown. Nested calls
/// from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tcs
