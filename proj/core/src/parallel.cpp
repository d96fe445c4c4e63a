#include "vh/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace vh {

namespace {

int initial_jobs() {
  if (const char* env = std::getenv("VH_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::atomic<int>& jobs_setting() {
  static std::atomic<int> jobs{initial_jobs()};
  return jobs;
}

}  // namespace

int default_jobs() { return jobs_setting().load(); }

void set_default_jobs(int jobs) { jobs_setting().store(std::max(1, jobs)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body, int jobs) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(jobs > 0 ? jobs : default_jobs()));
  if (workers <= 1 || n < 64) {
    body(0, n);
    return;
  }
  const std::size_t chunks = workers * 4;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      const std::size_t begin = n * c / chunks;
      const std::size_t end = n * (c + 1) / chunks;
      if (begin == end) continue;
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace vh
