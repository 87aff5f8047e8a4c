#pragma once

#include <cstddef>
#include <functional>

namespace nonlocal {

// Worker cap used by parallel_for when jobs == 0.
void set_default_jobs(std::size_t jobs);
std::size_t default_jobs();

// Runs body(i) for i in [0, n) on up to `jobs` threads.  Exceptions thrown by
// body are rethrown on the calling thread (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t jobs = 0);

}  // namespace nonlocal
