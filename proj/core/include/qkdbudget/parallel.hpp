#pragma once

#include <cstddef>
#include <functional>

namespace qkdbudget {

// Worker count: hardware concurrency capped by QKDBUDGET_THREADS when set.
unsigned default_worker_count();

// Run body(i) for i in [0, count) on up to `threads` workers. Exceptions
// thrown by body are rethrown (the first one) after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace qkdbudget
