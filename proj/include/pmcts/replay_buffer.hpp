#pragma once

#include <random>

#include "pmcts/mlp.hpp"

namespace pmcts {

// Fixed-capacity ring of training samples with uniform batch sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity);

  void push(TrainingSample s);
  size_t size() const { return size_; }
  size_t capacity() const { return ring_.size(); }

  // Uniform sampling with replacement. Throws std::logic_error when empty.
  std::vector<TrainingSample> sample_batch(size_t batch_size,
                                           std::mt19937_64& rng) const;

 private:
  std::vector<TrainingSample> ring_;
  size_t next_ = 0;
  size_t size_ = 0;
};

}  // namespace pmcts
