#pragma once

#include <cstddef>
#include <functional>

namespace anisolay {

/// Worker count: ANISOLAY_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) over static contiguous chunks, so the
/// assignment of indices to threads never depends on timing.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace anisolay
