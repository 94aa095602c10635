#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <thread>

#include "pmcts/evaluator.hpp"

namespace pmcts {

class ChannelClosed : public std::runtime_error {
 public:
  ChannelClosed() : std::runtime_error("evaluation channel is shut down") {}
};

// Asynchronous evaluation endpoint: dispatch enqueues without blocking,
// collect returns completions in completion order.
class EvalChannel {
 public:
  virtual ~EvalChannel() = default;
  virtual void dispatch(EvalRequest req) = 0;
  virtual EvalResult collect() = 0;
  virtual std::optional<EvalResult> try_collect() = 0;
  // Forces out any internally buffered work (batched implementations).
  virtual void flush() {}
};

// FIFO pipe to a pool of evaluation worker threads. Requests are pulled by
// idle workers in dispatch order; results arrive in completion order.
class ThreadPoolChannel final : public EvalChannel {
 public:
  ThreadPoolChannel(int num_workers, const Evaluator& evaluator);
  ~ThreadPoolChannel() override;

  void dispatch(EvalRequest req) override;
  EvalResult collect() override;
  std::optional<EvalResult> try_collect() override;

  void shutdown();

  int num_workers() const { return static_cast<int>(workers_.size()); }
  // Aggregate time workers spent evaluating, for utilization accounting.
  Duration total_busy() const;

 private:
  void worker_loop(int worker_id);

  const Evaluator& evaluator_;

  std::mutex mu_;
  std::condition_variable req_cv_;
  std::condition_variable res_cv_;
  std::deque<EvalRequest> requests_;
  std::deque<EvalResult> results_;
  bool closed_ = false;
  std::exception_ptr error_;
  std::atomic<int64_t> busy_ns_{0};

  std::vector<std::thread> workers_;
};

}  // namespace pmcts
