#include "titchlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace titchlab {

namespace {
std::atomic<unsigned> g_default_threads{0};
}

void set_default_threads(unsigned threads) { g_default_threads = threads; }

unsigned default_threads() {
  const unsigned t = g_default_threads.load();
  if (t != 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for_blocks(std::size_t n_blocks, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = default_threads();
  const auto workers = static_cast<std::size_t>(
      std::min<std::size_t>(threads, n_blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = n_blocks;
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace titchlab
