#pragma once

#include <cstddef>
#include <functional>

namespace kdica {

/// Process-wide cap for parallel sections; n <= 0 resets to the default
/// (KDICA_THREADS env var if set, otherwise the hardware thread count).
void set_max_threads(int n);

/// Resolved cap, always >= 1.
int max_threads();

/// Runs fn(begin, end) over disjoint contiguous chunks of [0, n). Each index
/// is processed exactly once; callers must only write per-index results, so
/// the output is identical for every thread cap.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace kdica
