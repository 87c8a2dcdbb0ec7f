#pragma once

#include <cstddef>
#include <functional>

namespace reviewflow {

/// Runs fn(i) for i in [0, count) on at most `concurrency` worker threads.
/// Workers pull the next index from a shared counter, so at most
/// `concurrency` calls are in flight at any moment. Returns after all
/// indices complete; the first exception escaping fn (there should be none,
/// workers are expected to capture their own failures) is rethrown.
void parallel_for_index(std::size_t count, int concurrency,
                        const std::function<void(std::size_t)>& fn);

}  // namespace reviewflow
