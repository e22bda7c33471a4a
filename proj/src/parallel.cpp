#include "phmm/parallel.hpp"

namespace phmm {

namespace {
thread_local const WorkerPool* tls_active_pool = nullptr;
}

WorkerPool::WorkerPool(unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  threads_.reserve(workers - 1);
  for (unsigned i = 1; i < workers; ++i) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::run(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  if (threads_.empty() || tls_active_pool == this) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    job_ = &fn;
    job_size_ = n;
    next_ = 0;
    finished_ = 0;
    error_ = nullptr;
    error_index_ = n;
    ++generation_;
  }
  wake_.notify_all();
  drain();
  std::unique_lock lock(mutex_);
  done_.wait(lock, [&] { return finished_ == job_size_; });
  job_ = nullptr;
  if (error_) std::rethrow_exception(error_);
}

void WorkerPool::drain() {
  const WorkerPool* previous = tls_active_pool;
  tls_active_pool = this;
  for (;;) {
    std::size_t i;
    const std::function<void(std::size_t)>* fn;
    {
      std::lock_guard lock(mutex_);
      if (job_ == nullptr || next_ >= job_size_) break;
      i = next_++;
      fn = job_;
    }
    std::exception_ptr err;
    try {
      (*fn)(i);
    } catch (...) {
      err = std::current_exception();
    }
    std::lock_guard lock(mutex_);
    if (err && i < error_index_) {
      error_ = err;
      error_index_ = i;
    }
    if (++finished_ == job_size_) done_.notify_all();
  }
  tls_active_pool = previous;
}

void WorkerPool::worker_loop() {
  std::size_t seen = 0;
  for (;;) {
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [&] { return stop_ || (generation_ != seen && job_ != nullptr); });
      if (stop_) return;
      seen = generation_;
    }
    drain();
  }
}

}  // namespace phmm
