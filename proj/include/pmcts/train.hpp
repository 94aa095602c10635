#pragma once

#include "pmcts/bench.hpp"
#include "pmcts/replay_buffer.hpp"

namespace pmcts {

struct TrainOutcome {
  std::vector<double> episode_loss;     // mean sampled-batch loss per episode
  std::vector<MetricsRow> move_rows;    // per-move search metrics
  std::vector<MetricsRow> episode_rows; // per-episode throughput + loss
  NetParams final_params;
  ResolvedScheme resolved;
};

// Self-play training: per move, search -> record (state, action prior) ->
// play the argmax action; at the terminal state rewards are back-filled
// sign-adjusted to each sample's mover; after each episode the network takes
// sgd_iterations plain-SGD steps on uniform replay batches. Requires
// evaluator kind "mlp". Writes checkpoints, a loss-vs-wall-clock CSV, and
// metrics into cfg.out_dir when set.
TrainOutcome run_train(const RunConfig& cfg);

}  // namespace pmcts
