#pragma once

#include "pmcts/search_common.hpp"

namespace pmcts {

struct SharedSearchConfig {
  int num_workers = 1;
  int playouts_per_move = 1600;  // must be >= num_workers
  UctParams uct;
  WorkloadEmu emu;
  RootNoiseConfig noise;
  bool record_trace = false;
  bool record_rollouts = false;  // capture per-rollout leaf/backup records
};

// Shared-tree parallel search: num_workers threads each run complete
// select -> evaluate -> expand -> backup rollouts against one tree whose
// nodes are protected by per-node locks. Evaluation happens on the worker's
// own thread, outside all locks. Playouts are statically divided (ceil
// division, remainder to low-index workers).
//
// Throws std::invalid_argument on a terminal root or bad config; worker
// exceptions abort the move and are rethrown with a diagnostic.
SearchResult search_shared(const State& root_state,
                           const SharedSearchConfig& cfg,
                           const Evaluator& evaluator);

}  // namespace pmcts
