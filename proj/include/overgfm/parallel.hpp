#pragma once

#include <cstddef>
#include <functional>

namespace overgfm {

/// Worker count for data-parallel loops. 1 runs everything inline
/// (default); 0 requests hardware concurrency.
void set_worker_threads(int count);
int worker_threads();

/// Runs fn(first, last) over disjoint ranges covering [0, count).
/// Each index is processed exactly once and writes only its own output
/// slots; callers own any cross-range reduction and must combine partials
/// in index order. Results are therefore identical for every worker count.
void parallel_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace overgfm
