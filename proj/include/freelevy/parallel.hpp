#pragma once

#include <cstddef>
#include <functional>

namespace freelevy {

// Hardware concurrency, capped by the FREELEVY_THREADS environment variable.
int worker_count();

// Runs fn(0..n-1) on up to worker_count() threads. Each index is handled
// exactly once, so results written per index do not depend on scheduling.
// If any call throws, the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace freelevy
