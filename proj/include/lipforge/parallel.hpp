#ifndef LIPFORGE_PARALLEL_HPP_
#define LIPFORGE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace lipforge {

// Worker count: LIPFORGE_THREADS if set and positive, else the hardware count.
unsigned worker_count();

// Runs fn(i) for i in [0, n). Results must be written to per-index slots so
// the outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace lipforge

#endif  // LIPFORGE_PARALLEL_HPP_
