#include "overgfm/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace overgfm {

namespace {
int g_workers = 1;
}

void set_worker_threads(int count) {
  if (count < 0) count = 1;
  if (count == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    count = hw == 0 ? 1 : static_cast<int>(hw);
  }
  g_workers = count;
}

int worker_threads() { return g_workers; }

void parallel_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(g_workers), std::max<std::size_t>(count, 1));
  if (workers <= 1 || count < 2) {
    if (count > 0) fn(0, count);
    return;
  }
  const std::size_t base = count / workers;
  const std::size_t extra = count % workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::size_t first = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    const std::size_t last = first + len;
    auto run = [&, first, last] {
      try {
        fn(first, last);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    };
    if (w + 1 == workers)
      run();  // caller thread takes the final range
    else
      pool.emplace_back(run);
    first = last;
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace overgfm
