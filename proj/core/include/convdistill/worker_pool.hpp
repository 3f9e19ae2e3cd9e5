#pragma once

#include <cstddef>
#include <functional>
#include <memory>

namespace convdistill {

/// A fixed set of `p` logical workers backed by OS threads.
///
/// run() hands every worker index in [0, p) to the body exactly once and
/// returns after all of them finish (a barrier). Worker 0 runs on the calling
/// thread. A run() issued from inside a worker body executes all indices
/// sequentially on the current thread instead of deadlocking.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const noexcept { return workers_; }

  /// The first exception thrown by any worker is rethrown after the barrier.
  void run(const std::function<void(std::size_t worker)>& body);

 private:
  struct State;

  void worker_loop(std::size_t worker);

  std::size_t workers_;
  std::unique_ptr<State> state_;
};

}  // namespace convdistill
