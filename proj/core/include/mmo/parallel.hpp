#pragma once

#include <cstddef>
#include <functional>

namespace mmo {

/// Worker count: MMO_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Indices
/// are handed out dynamically; results must be written to per-index slots.
/// If any call throws, the exception of the lowest failing index is rethrown
/// as PathError(i, what) after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mmo
