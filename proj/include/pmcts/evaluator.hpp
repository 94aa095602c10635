#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "pmcts/clock.hpp"
#include "pmcts/game.hpp"

namespace pmcts {

struct EvalRequest {
  std::vector<double> features;
  std::vector<uint8_t> legal_mask;  // one entry per action
  uint64_t ticket = 0;

  static EvalRequest from_state(const State& s, uint64_t ticket = 0);
};

struct EvalResult {
  std::vector<double> priors;  // full action space; illegal actions are 0
  double value = 0.0;          // in [-1, 1], mover's perspective
  uint64_t ticket = 0;
};

// Leaf evaluation. Implementations are immutable once constructed and safe
// to call concurrently from any number of threads.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual EvalResult evaluate(const EvalRequest& req) const = 0;
  virtual std::vector<EvalResult> evaluate_batch(
      std::span<const EvalRequest> reqs) const;
};

// Deterministic stand-in for a network of configurable cost: waits for the
// configured latency, then returns priors/value derived from a hash of
// (seed, features). Same seed and state always produce the same result.
class MockEvaluator final : public Evaluator {
 public:
  MockEvaluator(uint64_t seed, Duration latency)
      : seed_(seed), latency_(latency) {}

  EvalResult evaluate(const EvalRequest& req) const override;

  Duration latency() const { return latency_; }
  uint64_t seed() const { return seed_; }

  // The hash -> priors/value computation without the latency wait.
  static EvalResult compute(uint64_t seed, const EvalRequest& req);

 private:
  uint64_t seed_;
  Duration latency_;
};

}  // namespace pmcts
