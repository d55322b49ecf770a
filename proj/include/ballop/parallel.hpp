#pragma once

#include <functional>

namespace ballop {

/// Number of worker threads: 1 unless BALLOP_THREADS raises it (capped at
/// hardware concurrency). Keeps runs deterministic by default.
int worker_threads();

/// Runs body(i) for i in [0, n). Each index writes only its own slot in the
/// caller's output, so results are deterministic for any thread count.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace ballop
