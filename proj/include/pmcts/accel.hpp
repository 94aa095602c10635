#pragma once

#include <condition_variable>
#include <deque>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "pmcts/eval_channel.hpp"

namespace pmcts {

// Latency model of a batch-evaluation device: per-submission launch cost,
// transfer bandwidth, and an affine compute-time curve. Drives both the mock
// device's actual delays and the analytical predictions.
struct AccelModel {
  Duration launch_latency{0};  // L, per batch submission
  double bandwidth_items_per_sec = std::numeric_limits<double>::infinity();
  Duration compute_fixed{0};     // c0: per-batch kernel cost
  Duration compute_per_item{0};  // c1: marginal per-item cost
  int max_streams = 64;          // cap on concurrent in-flight batches

  Duration transfer_time(int batch) const;  // L + batch / bandwidth
  Duration compute_time(int batch) const;   // c0 + c1 * batch

  // Total transfer cost of N items moved in ceil(N/B) batches.
  Duration transfer_total(int batch, int n_items) const;
  // Transfer + compute of one full batch of n items (Eq.-4-style single
  // submission).
  Duration full_batch_time(int n_items) const;
};

// Modeled accelerator time for N iterations at communication batch size B:
// max of the total transfer sequence and the per-batch compute time, under
// the reading that streams overlap transfer with compute. Throws
// std::domain_error unless 1 <= B <= N.
Duration batch_latency(const AccelModel& model, int batch, int n_items);

// One batch pass through the device. Implementations serialize their
// transfer and compute engines internally so concurrent in-flight batches
// pipeline rather than run fully parallel.
class AccelDevice {
 public:
  virtual ~AccelDevice() = default;
  virtual std::vector<EvalResult> process(std::vector<EvalRequest> batch) = 0;
};

// Mock device: waits out the modeled transfer and compute phases, then
// produces deterministic hash-derived results.
class MockAccelDevice final : public AccelDevice {
 public:
  MockAccelDevice(const AccelModel& model, uint64_t seed)
      : model_(model), seed_(seed) {}
  std::vector<EvalResult> process(std::vector<EvalRequest> batch) override;

 private:
  AccelModel model_;
  uint64_t seed_;
  std::mutex transfer_mu_;
  std::mutex compute_mu_;
};

// Real-compute device: modeled launch/transfer cost, genuine row-wise batch
// evaluation for the compute phase.
class CpuAccelDevice final : public AccelDevice {
 public:
  CpuAccelDevice(const AccelModel& model, const Evaluator& evaluator)
      : model_(model), evaluator_(evaluator) {}
  std::vector<EvalResult> process(std::vector<EvalRequest> batch) override;

 private:
  AccelModel model_;
  const Evaluator& evaluator_;
  std::mutex transfer_mu_;
  std::mutex compute_mu_;
};

struct BatchHandle {
  uint64_t id = 0;
  int size = 0;
};

// Accumulates requests until the threshold B, then drains them into a batch
// and hands it to a free stream (blocking while all streams are busy).
// Safe for multiple producers.
class BatchQueue {
 public:
  BatchQueue(int threshold, int streams, AccelDevice& device);
  ~BatchQueue();

  std::optional<BatchHandle> submit(EvalRequest req);
  std::optional<BatchHandle> flush();

  EvalResult collect();
  std::optional<EvalResult> try_collect();

  void shutdown();

  int threshold() const { return threshold_; }
  int streams() const { return static_cast<int>(stream_threads_.size()); }
  uint64_t batches_launched() const;

 private:
  BatchHandle launch_locked(std::unique_lock<std::mutex>& g);
  void stream_loop();

  const int threshold_;
  AccelDevice& device_;

  mutable std::mutex mu_;
  std::condition_variable stream_free_cv_;
  std::condition_variable launch_cv_;
  std::condition_variable result_cv_;
  std::vector<EvalRequest> pending_;
  std::deque<std::vector<EvalRequest>> launch_q_;
  std::deque<EvalResult> results_;
  int busy_streams_ = 0;
  uint64_t next_batch_id_ = 1;
  bool closed_ = false;
  std::exception_ptr error_;

  std::vector<std::thread> stream_threads_;
};

// EvalChannel adapter over a BatchQueue, used by the local scheme when an
// accelerator is configured.
class AccelChannel final : public EvalChannel {
 public:
  AccelChannel(int threshold, int streams, AccelDevice& device)
      : queue_(threshold, streams, device) {}

  void dispatch(EvalRequest req) override { queue_.submit(std::move(req)); }
  EvalResult collect() override { return queue_.collect(); }
  std::optional<EvalResult> try_collect() override {
    return queue_.try_collect();
  }
  void flush() override { queue_.flush(); }

  BatchQueue& queue() { return queue_; }

 private:
  BatchQueue queue_;
};

}  // namespace pmcts
