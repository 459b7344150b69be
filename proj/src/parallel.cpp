#include "repump/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace repump {

unsigned default_workers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

void parallel_chunks(std::size_t n_items, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, unsigned)>& fn) {
  if (n_items == 0) return;
  workers = std::max(1u, workers);
  const unsigned n_slots =
      static_cast<unsigned>(std::min<std::size_t>(workers, n_items));
  if (n_slots == 1) {
    fn(0, n_items, 0);
    return;
  }
  const std::size_t chunk = (n_items + n_slots - 1) / n_slots;
  std::vector<std::thread> pool;
  pool.reserve(n_slots - 1);
  for (unsigned slot = 1; slot < n_slots; ++slot) {
    const std::size_t begin = slot * chunk;
    const std::size_t end = std::min(n_items, begin + chunk);
    if (begin >= end) continue;
    pool.emplace_back([&fn, begin, end, slot] { fn(begin, end, slot); });
  }
  fn(0, std::min(n_items, chunk), 0);
  for (auto& t : pool) t.join();
}

}  // namespace repump
