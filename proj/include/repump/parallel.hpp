#pragma once

#include <cstddef>
#include <functional>

namespace repump {

unsigned default_workers();

// Runs fn(begin, end, slot) over a partition of [0, n_items) using at most
// `workers` threads. Slots are 0..n_slots-1 and each slot owns a contiguous
// range, so per-slot accumulators can be merged in slot order afterwards.
// Results must not depend on the partition; callers guarantee that by
// deriving all randomness from per-item substreams.
void parallel_chunks(std::size_t n_items, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, unsigned)>& fn);

}  // namespace repump
