#pragma once

#include <cstddef>
#include <functional>

namespace mcflow {

/// Worker count for assembly loops: MCFLOW_THREADS if set and positive,
/// otherwise std::thread::hardware_concurrency().
int assembly_threads();

/// Overrides the worker count for this process; 0 restores the default.
void set_assembly_threads(int n);

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
/// depend only on n and the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace mcflow
