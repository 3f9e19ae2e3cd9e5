#include "convdistill/worker_pool.hpp"

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "convdistill/errors.hpp"

namespace convdistill {

namespace {
thread_local bool tls_inside_worker = false;

class InsideWorkerScope {
 public:
  InsideWorkerScope() : previous_(tls_inside_worker) { tls_inside_worker = true; }
  ~InsideWorkerScope() { tls_inside_worker = previous_; }

 private:
  bool previous_;
};
}  // namespace

struct WorkerPool::State {
  std::mutex run_mutex;  // one run() in flight per pool

  std::mutex mutex;
  std::condition_variable start_cv;
  std::condition_variable done_cv;
  const std::function<void(std::size_t)>* body = nullptr;
  std::uint64_t generation = 0;
  std::size_t pending = 0;
  bool stopping = false;
  std::exception_ptr error;

  std::vector<std::thread> threads;
};

WorkerPool::WorkerPool(std::size_t workers) : workers_(workers), state_(std::make_unique<State>()) {
  if (workers == 0) throw Error(ErrorCode::InvalidArgument, "worker pool needs at least one worker");
  state_->threads.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    state_->threads.emplace_back([this, w] { worker_loop(w); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(state_->mutex);
    state_->stopping = true;
  }
  state_->start_cv.notify_all();
  for (auto& t : state_->threads) t.join();
}

void WorkerPool::worker_loop(std::size_t worker) {
  std::uint64_t seen = 0;
  for (;;) {
    const std::function<void(std::size_t)>* body = nullptr;
    {
      std::unique_lock lock(state_->mutex);
      state_->start_cv.wait(lock, [&] { return state_->stopping || state_->generation != seen; });
      if (state_->stopping) return;
      seen = state_->generation;
      body = state_->body;
    }
    std::exception_ptr error;
    try {
      InsideWorkerScope scope;
      (*body)(worker);
    } catch (...) {
      error = std::current_exception();
    }
    std::lock_guard lock(state_->mutex);
    if (error && !state_->error) state_->error = error;
    if (--state_->pending == 0) state_->done_cv.notify_one();
  }
}

void WorkerPool::run(const std::function<void(std::size_t)>& body) {
  if (workers_ == 1 || tls_inside_worker) {
    for (std::size_t w = 0; w < workers_; ++w) body(w);
    return;
  }

  std::lock_guard run_lock(state_->run_mutex);
  {
    std::lock_guard lock(state_->mutex);
    state_->body = &body;
    state_->pending = workers_ - 1;
    state_->error = nullptr;
    ++state_->generation;
  }
  state_->start_cv.notify_all();

  std::exception_ptr local_error;
  try {
    InsideWorkerScope scope;
    body(0);
  } catch (...) {
    local_error = std::current_exception();
  }

  std::exception_ptr error;
  {
    std::unique_lock lock(state_->mutex);
    state_->done_cv.wait(lock, [&] { return state_->pending == 0; });
    error = local_error ? local_error : state_->error;
    state_->body = nullptr;
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace convdistill
