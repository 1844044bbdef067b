#pragma once

#include <functional>

#include "ltd/tensor.hpp"

namespace ltd {

/// Worker count: hardware concurrency, capped by the LTD_THREADS environment
/// variable when it holds a positive integer.
int worker_count();

/// Runs body(0) .. body(n-1), possibly on several threads. Callers must write
/// to disjoint locations per index; results then do not depend on the thread
/// count.
void parallel_for(Index n, const std::function<void(Index)> &body);

} // namespace ltd
