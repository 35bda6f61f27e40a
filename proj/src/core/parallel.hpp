#pragma once

#include <cstddef>
#include <functional>

namespace outerfact::detail {

/// Worker count: OUTERFACT_THREADS when set and positive, otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Callers
/// write into per-index slots and reduce afterwards, so results do not
/// depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace outerfact::detail
