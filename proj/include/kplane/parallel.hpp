#pragma once

#include <cstddef>
#include <functional>

namespace kplane {

/// Worker count: KPLANE_THREADS when set to a positive integer, else the
/// hardware concurrency.
unsigned thread_budget();

/// Runs body(i) for i in [0, n) on up to thread_budget() threads. Indices are
/// split into contiguous blocks; body must only write state owned by i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace kplane
