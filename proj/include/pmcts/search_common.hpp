#pragma once

#include <string>
#include <vector>

#include "pmcts/clock.hpp"
#include "pmcts/evaluator.hpp"
#include "pmcts/tree.hpp"

namespace pmcts {

enum class Phase { select, eval, expand, backup, block };

const char* phase_name(Phase p);

// One timed span inside a move; timestamps are offsets from the move start.
struct TraceEvent {
  int worker = 0;       // worker id, or -1 for the master thread
  int rollout = 0;      // rollout index within the move
  Phase phase = Phase::select;
  Duration begin{0};
  Duration end{0};
  int path_len = 0;     // for select/backup
  int in_flight = 0;    // snapshot for block events
  const char* note = "";
};

struct MoveTrace {
  bool enabled = false;
  std::vector<TraceEvent> events;
};

// Tab-separated trace serialization (one event per line).
std::string trace_to_text(const MoveTrace& trace);

struct SearchStats {
  int playouts = 0;
  Duration move_time{0};
  size_t tree_nodes = 0;
  int evaluator_calls = 0;
  int max_in_flight = 0;                 // local scheme
  int provisional_backups = 0;           // local scheme
  double worker_utilization = 0.0;       // local scheme, busy/(N*wall)
  std::vector<int> per_worker_rollouts;  // shared scheme

  double amortized_latency_ms() const {
    return playouts > 0 ? to_ms(move_time) / playouts : 0.0;
  }
};

// Leaf/backup record of one rollout: the action path from the root to the
// selected leaf and the value that was backed up (leaf perspective).
struct RolloutRecord {
  std::vector<ActionId> path;
  double value = 0.0;
};

struct SearchResult {
  std::vector<double> action_prior;  // over the full action space, sums to 1
  SearchStats stats;
  MoveTrace trace;
  std::vector<RolloutRecord> rollouts;  // filled when record_rollouts is set
};

// Root-to-leaf action ids along the leaf's parent chain.
std::vector<ActionId> path_actions(const TreeNode& leaf);

// Root exploration noise knobs shared by the scheme configs. Disabled when
// epsilon == 0 (the default).
struct RootNoiseConfig {
  double alpha = 0.3;
  double epsilon = 0.0;
  uint64_t seed = 0;
};

// Extracts result.priors at the leaf's legal actions, in legal order.
std::vector<double> gather_legal_priors(const State& leaf_state,
                                        const EvalResult& result);

// Visit-count distribution over the full action space from the root's edges.
std::vector<double> root_action_prior(const TreeNode& root, int action_count);

}  // namespace pmcts
