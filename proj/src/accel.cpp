#include "pmcts/accel.hpp"

#include <cmath>

namespace pmcts {

Duration AccelModel::transfer_time(int batch) const {
  if (bandwidth_items_per_sec <= 0.0) {
    throw std::domain_error("bandwidth must be positive");
  }
  const double sec = static_cast<double>(batch) / bandwidth_items_per_sec;
  return launch_latency + std::chrono::duration_cast<Duration>(
                              std::chrono::duration<double>(sec));
}

Duration AccelModel::compute_time(int batch) const {
  return compute_fixed + compute_per_item * batch;
}

Duration AccelModel::transfer_total(int batch, int n_items) const {
  const int launches = (n_items + batch - 1) / batch;
  const double sec = static_cast<double>(n_items) / bandwidth_items_per_sec;
  return launch_latency * launches + std::chrono::duration_cast<Duration>(
                                         std::chrono::duration<double>(sec));
}

Duration AccelModel::full_batch_time(int n_items) const {
  return transfer_time(n_items) + compute_time(n_items);
}

Duration batch_latency(const AccelModel& model, int batch, int n_items) {
  if (batch < 1 || batch > n_items) {
    throw std::domain_error("batch size out of [1, N]");
  }
  return std::max(model.transfer_total(batch, n_items),
                  model.compute_time(batch));
}

std::vector<EvalResult> MockAccelDevice::process(
    std::vector<EvalRequest> batch) {
  const int b = static_cast<int>(batch.size());
  {
    std::lock_guard<std::mutex> g(transfer_mu_);
    precise_delay(model_.transfer_time(b));
  }
  {
    std::lock_guard<std::mutex> g(compute_mu_);
    precise_delay(model_.compute_time(b));
  }
  std::vector<EvalResult> out;
  out.reserve(batch.size());
  for (const auto& req : batch) {
    out.push_back(MockEvaluator::compute(seed_, req));
  }
  return out;
}

std::vector<EvalResult> CpuAccelDevice::process(
    std::vector<EvalRequest> batch) {
  {
    std::lock_guard<std::mutex> g(transfer_mu_);
    precise_delay(model_.transfer_time(static_cast<int>(batch.size())));
  }
  std::lock_guard<std::mutex> g(compute_mu_);
  return evaluator_.evaluate_batch(batch);
}

BatchQueue::BatchQueue(int threshold, int streams, AccelDevice& device)
    : threshold_(threshold), device_(device) {
  if (threshold < 1) throw std::invalid_argument("batch threshold < 1");
  if (streams < 1) throw std::invalid_argument("streams < 1");
  stream_threads_.reserve(streams);
  for (int i = 0; i < streams; ++i) {
    stream_threads_.emplace_back(&BatchQueue::stream_loop, this);
  }
}

BatchQueue::~BatchQueue() { shutdown(); }

void BatchQueue::shutdown() {
  {
    std::lock_guard<std::mutex> g(mu_);
    if (closed_) return;
    closed_ = true;
  }
  launch_cv_.notify_all();
  result_cv_.notify_all();
  stream_free_cv_.notify_all();
  for (auto& t : stream_threads_) {
    if (t.joinable()) t.join();
  }
}

BatchHandle BatchQueue::launch_locked(std::unique_lock<std::mutex>& g) {
  // Wait for a free stream; in-flight batches never exceed the stream count.
  stream_free_cv_.wait(g, [&] {
    return busy_streams_ + static_cast<int>(launch_q_.size()) <
               static_cast<int>(stream_threads_.size()) ||
           closed_;
  });
  if (closed_) throw ChannelClosed();
  BatchHandle h{next_batch_id_++, static_cast<int>(pending_.size())};
  launch_q_.emplace_back(std::move(pending_));
  pending_.clear();
  launch_cv_.notify_one();
  return h;
}

std::optional<BatchHandle> BatchQueue::submit(EvalRequest req) {
  std::unique_lock<std::mutex> g(mu_);
  if (closed_) throw ChannelClosed();
  if (error_) std::rethrow_exception(error_);
  pending_.push_back(std::move(req));
  if (static_cast<int>(pending_.size()) >= threshold_) {
    return launch_locked(g);
  }
  return std::nullopt;
}

std::optional<BatchHandle> BatchQueue::flush() {
  std::unique_lock<std::mutex> g(mu_);
  if (closed_) throw ChannelClosed();
  if (pending_.empty()) return std::nullopt;
  return launch_locked(g);
}

EvalResult BatchQueue::collect() {
  std::unique_lock<std::mutex> g(mu_);
  result_cv_.wait(g, [&] { return !results_.empty() || closed_ || error_; });
  if (error_ && results_.empty()) std::rethrow_exception(error_);
  if (results_.empty()) throw ChannelClosed();
  EvalResult r = std::move(results_.front());
  results_.pop_front();
  return r;
}

std::optional<EvalResult> BatchQueue::try_collect() {
  std::lock_guard<std::mutex> g(mu_);
  if (error_ && results_.empty()) std::rethrow_exception(error_);
  if (results_.empty()) return std::nullopt;
  EvalResult r = std::move(results_.front());
  results_.pop_front();
  return r;
}

uint64_t BatchQueue::batches_launched() const {
  std::lock_guard<std::mutex> g(mu_);
  return next_batch_id_ - 1;
}

void BatchQueue::stream_loop() {
  reduce_timer_slack();
  for (;;) {
    std::vector<EvalRequest> batch;
    {
      std::unique_lock<std::mutex> g(mu_);
      launch_cv_.wait(g, [&] { return !launch_q_.empty() || closed_; });
      if (launch_q_.empty()) return;
      batch = std::move(launch_q_.front());
      launch_q_.pop_front();
      ++busy_streams_;
    }
    try {
      std::vector<EvalResult> res = device_.process(std::move(batch));
      {
        std::lock_guard<std::mutex> g(mu_);
        for (auto& r : res) results_.push_back(std::move(r));
        --busy_streams_;
      }
      result_cv_.notify_all();
      stream_free_cv_.notify_all();
    } catch (...) {
      {
        std::lock_guard<std::mutex> g(mu_);
        if (!error_) error_ = std::current_exception();
        --busy_streams_;
      }
      result_cv_.notify_all();
      stream_free_cv_.notify_all();
      return;
    }
  }
}

}  // namespace pmcts
