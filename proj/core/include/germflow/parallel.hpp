#pragma once

#include <cstddef>
#include <functional>

namespace germflow {

/// Worker cap: min(hardware, GERMFLOW_THREADS when set). At least 1.
int max_threads();

/// Runs body(i) for i in [0, count) over the capped worker pool. Bodies must
/// be independent; callers keep determinism by writing to index i only
/// (aggregation order is then the index order, regardless of scheduling).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace germflow
