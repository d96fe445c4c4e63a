#pragma once

#include <cstddef>
#include <functional>

namespace vh {

/// Worker count used when a call passes jobs = 0. Initialized from the
/// VH_JOBS environment variable, else the hardware concurrency.
int default_jobs();
void set_default_jobs(int jobs);

/// Runs body(begin, end) over contiguous chunks of [0, n) on up to `jobs`
/// threads. Chunk boundaries depend only on n and the worker count, so
/// per-index results are independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  int jobs = 0);

}  // namespace vh
