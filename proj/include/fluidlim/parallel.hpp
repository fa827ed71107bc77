#ifndef FLUIDLIM_PARALLEL_HPP
#define FLUIDLIM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace fluidlim {

/// Worker count from FLUIDLIM_THREADS (0 or unset means hardware concurrency).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// runs exactly once; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fluidlim

#endif  // FLUIDLIM_PARALLEL_HPP
