#pragma once

#include <cstddef>
#include <functional>

namespace poikit {

/// Worker cap: POIKIT_THREADS when set and > 0, otherwise the hardware
/// concurrency (POIKIT_THREADS=0 also means auto).
unsigned worker_count();

/// Runs fn(0..n-1) across worker_count() threads. Work items must be
/// independent; exceptions are rethrown on the calling thread (lowest index
/// wins when several items throw).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace poikit
