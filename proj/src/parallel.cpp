#include "critsense/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace critsense {

namespace {

std::atomic<int> g_forced_workers{0};
thread_local bool t_inside_parallel = false;

int env_thread_cap() {
  const char* raw = std::getenv("CRITSENSE_THREADS");
  if (raw == nullptr) return 0;
  const int value = std::atoi(raw);
  return value > 0 ? value : 0;
}

}  // namespace

int worker_count() {
  if (const int forced = g_forced_workers.load(); forced > 0) return forced;
  int count = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const int env = env_thread_cap(); env > 0) count = std::min(count, env);
  return count;
}

void set_worker_count(int count) { g_forced_workers.store(std::max(0, count)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  // Nested calls run inline on the calling worker.
  const auto workers = t_inside_parallel ? 1 : static_cast<std::size_t>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    const bool outer = t_inside_parallel;
    t_inside_parallel = true;
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    t_inside_parallel = outer;
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace critsense
