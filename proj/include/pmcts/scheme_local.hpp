#pragma once

#include <optional>

#include "pmcts/accel.hpp"
#include "pmcts/search_common.hpp"

namespace pmcts {

// Batched accelerator evaluation for the local scheme. When present,
// evaluation requests flow through a BatchQueue instead of per-thread
// evaluators.
struct AccelSearchConfig {
  AccelModel model;
  int batch = 1;    // communication batch size B, 1 <= B <= num_workers
  int streams = 0;  // 0: ceil(N / B), capped at model.max_streams
  bool mock_device = true;  // false: real batched compute via the evaluator
  uint64_t mock_seed = 1;
};

struct LocalSearchConfig {
  int num_workers = 1;  // evaluation threads / in-flight request cap
  int playouts_per_move = 1600;
  UctParams uct;
  WorkloadEmu emu;  // shared_root_access does not apply (tree is unlocked)
  RootNoiseConfig noise;
  // When a selection re-reaches a leaf whose expansion is in flight:
  // false (default): back up a provisional 0 and count the playout;
  // true: abandon the selection and block until a result resolves.
  bool block_on_pending = false;
  bool record_trace = false;
  bool record_rollouts = false;  // capture per-rollout leaf/backup records
  std::optional<AccelSearchConfig> accel;
};

// Local-tree parallel search: a single master thread owns the tree and runs
// all in-tree operations, dispatching leaf evaluations to num_workers
// asynchronous workers (or the batched accelerator) and backing results up
// as they complete. In-flight evaluations never exceed num_workers.
SearchResult search_local(const State& root_state,
                          const LocalSearchConfig& cfg,
                          const Evaluator& evaluator);

}  // namespace pmcts
