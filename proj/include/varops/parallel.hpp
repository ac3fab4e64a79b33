#pragma once

#include <cstddef>
#include <functional>

namespace varops::detail {

// Number of worker threads, capped by the VAROPS_THREADS environment variable.
unsigned thread_budget();

// Runs body(begin, end) over a static chunking of [0, count). Chunks are
// disjoint, so callers writing to per-index slots get scheduling-independent
// results. Nested calls run serially to avoid thread explosion.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

} // namespace varops::detail
