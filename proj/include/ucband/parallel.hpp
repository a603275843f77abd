#pragma once

#include <cstddef>
#include <functional>

namespace ucband {

/// Worker count: UCBAND_THREADS if set, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Work is handed out by index, so any
/// body that writes only to slot i produces scheduling-independent output.
/// Nested calls from inside a worker run serially on that worker.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ucband
