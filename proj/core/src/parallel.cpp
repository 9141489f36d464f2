#include "mmo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "mmo/error.hpp"

namespace mmo {

std::size_t worker_count() {
  if (const char* env = std::getenv("MMO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::string failed_what;

  auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failed_what = e.what();
        }
        stop = true;
      }
    }
  };

  const std::size_t n = std::min(worker_count(), count);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(n);
    for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
  }
  if (failed_index != std::numeric_limits<std::size_t>::max()) {
    throw PathError(failed_index, failed_what);
  }
}

}  // namespace mmo
