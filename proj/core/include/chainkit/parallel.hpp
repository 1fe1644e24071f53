#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace chainkit {

/// Worker count: CHAINKIT_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(begin, end) on contiguous chunks of [0, count) from up to
/// worker_count() threads. Chunks are disjoint, so bodies that write only to
/// their own indices produce thread-count-independent results.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

/// Pairwise (cascade) summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

}  // namespace chainkit
