#pragma once

#include <cstdint>
#include <functional>

namespace qpdirac {

/// Worker count from QPDIRAC_THREADS, falling back to the hardware concurrency.
unsigned thread_count();

/// Calls body(begin, end) on disjoint contiguous chunks covering [0, n).
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace qpdirac
