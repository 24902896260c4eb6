#ifndef SPHSTEIN_PARALLEL_HPP
#define SPHSTEIN_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace sphstein {

// Worker count used by parallel_for_index. 0 means hardware concurrency.
void set_num_threads(int n);
int num_threads();

// Runs fn(i) for i in [0, count). Work is handed out through an atomic
// counter, so the assignment of indices to workers is arbitrary; callers must
// write results into per-index slots to stay deterministic under any worker
// count. The first exception thrown by any worker is rethrown.
void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace sphstein

#endif
