#include "pmcts/replay_buffer.hpp"

#include <stdexcept>

namespace pmcts {

ReplayBuffer::ReplayBuffer(size_t capacity) {
  if (capacity == 0) throw std::invalid_argument("zero-capacity buffer");
  ring_.resize(capacity);
}

void ReplayBuffer::push(TrainingSample s) {
  ring_[next_] = std::move(s);
  next_ = (next_ + 1) % ring_.size();
  if (size_ < ring_.size()) ++size_;
}

std::vector<TrainingSample> ReplayBuffer::sample_batch(
    size_t batch_size, std::mt19937_64& rng) const {
  if (size_ == 0) throw std::logic_error("sampling from empty replay buffer");
  std::uniform_int_distribution<size_t> pick(0, size_ - 1);
  std::vector<TrainingSample> batch;
  batch.reserve(batch_size);
  for (size_t i = 0; i < batch_size; ++i) batch.push_back(ring_[pick(rng)]);
  return batch;
}

}  // namespace pmcts
