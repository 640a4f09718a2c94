#pragma once

// Internal fork-join helper. Work is split into contiguous index ranges so
// results written by index are identical for any worker count; the worker
// count comes from the OSID_WORKERS environment variable (default: hardware
// concurrency). When several workers fail, the error from the lowest index
// is rethrown.

#include <cstddef>
#include <functional>

namespace osid::detail {

std::size_t worker_count();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace osid::detail
