#pragma once

#include <cstddef>
#include <functional>

namespace gl3 {

// Worker count used by parallel loops; 0 selects hardware concurrency.
void set_worker_count(unsigned n);
unsigned worker_count();

// Runs body(i) for i in [0, n). Iterations are independent and each writes
// only its own slot, so results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gl3
