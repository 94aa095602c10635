#include "pmcts/eval_channel.hpp"

namespace pmcts {

ThreadPoolChannel::ThreadPoolChannel(int num_workers,
                                     const Evaluator& evaluator)
    : evaluator_(evaluator) {
  if (num_workers < 1) throw std::invalid_argument("num_workers < 1");
  workers_.reserve(num_workers);
  for (int i = 0; i < num_workers; ++i) {
    workers_.emplace_back(&ThreadPoolChannel::worker_loop, this, i);
  }
}

ThreadPoolChannel::~ThreadPoolChannel() { shutdown(); }

void ThreadPoolChannel::shutdown() {
  {
    std::lock_guard<std::mutex> g(mu_);
    if (closed_) return;
    closed_ = true;
  }
  req_cv_.notify_all();
  res_cv_.notify_all();
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
}

void ThreadPoolChannel::dispatch(EvalRequest req) {
  {
    std::lock_guard<std::mutex> g(mu_);
    if (closed_) throw ChannelClosed();
    requests_.push_back(std::move(req));
  }
  req_cv_.notify_one();
}

EvalResult ThreadPoolChannel::collect() {
  std::unique_lock<std::mutex> g(mu_);
  res_cv_.wait(g, [&] { return !results_.empty() || closed_ || error_; });
  if (error_ && results_.empty()) std::rethrow_exception(error_);
  if (results_.empty()) throw ChannelClosed();
  EvalResult r = std::move(results_.front());
  results_.pop_front();
  return r;
}

std::optional<EvalResult> ThreadPoolChannel::try_collect() {
  std::lock_guard<std::mutex> g(mu_);
  if (error_ && results_.empty()) std::rethrow_exception(error_);
  if (results_.empty()) return std::nullopt;
  EvalResult r = std::move(results_.front());
  results_.pop_front();
  return r;
}

Duration ThreadPoolChannel::total_busy() const {
  return Duration(busy_ns_.load(std::memory_order_relaxed));
}

void ThreadPoolChannel::worker_loop(int worker_id) {
  (void)worker_id;
  reduce_timer_slack();
  for (;;) {
    EvalRequest req;
    {
      std::unique_lock<std::mutex> g(mu_);
      req_cv_.wait(g, [&] { return !requests_.empty() || closed_; });
      if (requests_.empty()) return;  // closed and drained
      req = std::move(requests_.front());
      requests_.pop_front();
    }
    try {
      const auto t0 = Clock::now();
      EvalResult res = evaluator_.evaluate(req);
      busy_ns_.fetch_add((Clock::now() - t0).count(),
                         std::memory_order_relaxed);
      {
        std::lock_guard<std::mutex> g(mu_);
        results_.push_back(std::move(res));
      }
      res_cv_.notify_one();
    } catch (...) {
      {
        std::lock_guard<std::mutex> g(mu_);
        if (!error_) error_ = std::current_exception();
      }
      res_cv_.notify_all();
      return;
    }
  }
}

}  // namespace pmcts
