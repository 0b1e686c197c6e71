#pragma once

#include <cstddef>
#include <functional>

namespace ceap {

/// Worker cap from PTRANSFORM_THREADS (unset or 0 = hardware concurrency).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each
/// index runs exactly once; the first exception thrown is rethrown after
/// all workers have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ceap
