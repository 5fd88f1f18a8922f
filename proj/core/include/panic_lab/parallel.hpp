#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace panic_lab {

// 0 means "all hardware threads".
unsigned resolve_threads(unsigned requested) noexcept;

// Fixed set of workers that repeatedly split an index range [0, n) into
// contiguous chunks. Chunk boundaries depend only on n and the worker count,
// and callers must write disjoint outputs per index.
class ThreadPool {
 public:
  using ChunkFn = std::function<void(std::size_t begin, std::size_t end)>;

  explicit ThreadPool(unsigned threads);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  [[nodiscard]] unsigned size() const noexcept {
    return static_cast<unsigned>(workers_.size()) + 1;
  }

  void parallel_for(std::size_t n, const ChunkFn& fn);

 private:
  void worker_loop(std::stop_token stop, unsigned index);
  void run_chunk(unsigned index);

  std::vector<std::jthread> workers_;
  std::mutex mutex_;
  std::condition_variable_any wake_;
  std::condition_variable done_;
  const ChunkFn* job_ = nullptr;
  std::size_t job_size_ = 0;
  std::size_t generation_ = 0;
  unsigned pending_ = 0;
};

}  // namespace panic_lab
