#ifndef PHMM_PARALLEL_HPP_
#define PHMM_PARALLEL_HPP_

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace phmm {

/// Fixed set of worker threads executing index-parallel loops.
///
/// Work items are identified only by their index; callers write results into
/// per-index slots and reduce afterwards in index order, which keeps every
/// result independent of the worker count. Nested calls from inside a running
/// loop execute inline.
class WorkerPool {
 public:
  /// `workers` counts the calling thread; 0 means hardware concurrency.
  explicit WorkerPool(unsigned workers = 1);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  unsigned size() const { return static_cast<unsigned>(threads_.size()) + 1; }

  /// Calls fn(i) for every i in [0, n) and blocks until all are done. If any
  /// call throws, the exception from the lowest failing index is rethrown.
  void run(std::size_t n, const std::function<void(std::size_t)>& fn);

 private:
  void worker_loop();
  void drain();

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t job_size_ = 0;
  std::size_t next_ = 0;
  std::size_t finished_ = 0;
  std::size_t generation_ = 0;
  std::size_t error_index_ = 0;
  std::exception_ptr error_;
  bool stop_ = false;
};

/// Runs the loop on `pool` when given, otherwise serially.
inline void parallel_for(WorkerPool* pool, std::size_t n,
                         const std::function<void(std::size_t)>& fn) {
  if (pool != nullptr && pool->size() > 1 && n > 1) {
    pool->run(n, fn);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace phmm

#endif  // PHMM_PARALLEL_HPP_
