#pragma once

#include <atomic>
#include <deque>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pmcts/clock.hpp"
#include "pmcts/game.hpp"

namespace pmcts {

struct UctParams {
  double c = 1.4;           // exploration constant, > 0
  double virtual_loss = 1.0;  // VL magnitude, >= 0
};

// Per-edge statistics. Q = W/N for completed visits; the effective values fed
// into selection fold in pending virtual losses so concurrent workers diverge.
struct EdgeStats {
  ActionId action = -1;
  double p = 0.0;  // prior from the evaluator
  double w = 0.0;  // accumulated signed value
  double q = 0.0;  // w / n, 0 while n == 0
  int n = 0;       // completed visit count
  int vl_pending = 0;

  double n_eff() const { return static_cast<double>(n) + vl_pending; }
  double q_eff(double virtual_loss) const {
    const double ne = n_eff();
    if (ne <= 0.0) return 0.0;
    return (w - virtual_loss * vl_pending) / ne;
  }
};

// Workload emulation for performance experiments. Latencies are modeled as
// waits (in-tree operations are memory-latency-bound), so they overlap across
// threads the way the latency models assume, independent of core count.
// All zero by default, i.e. disabled.
struct WorkloadEmu {
  Duration select_work_per_node{0};  // paid per traversed node, outside locks
  Duration backup_work_per_node{0};  // paid per updated edge, outside locks
  Duration shared_root_access{0};    // paid under the root lock (locked mode)
};

class VirtualLossUnderflow : public std::logic_error {
 public:
  VirtualLossUnderflow() : std::logic_error("vl_pending underflow: backup without matching selection") {}
};

class TreeNode {
 public:
  TreeNode(std::unique_ptr<const State> state, TreeNode* parent,
           int parent_edge);

  const State& state() const { return *state_; }
  Outcome outcome() const { return outcome_; }
  bool terminal() const { return outcome_.terminal(); }
  bool expanded() const { return expanded_.load(std::memory_order_acquire); }

  TreeNode* parent() const { return parent_; }
  int parent_edge() const { return parent_edge_; }

  // Valid only after expansion (edges/children are created by expand()).
  std::vector<EdgeStats> edges;
  std::vector<TreeNode*> children;  // parallel to edges; nullptr until visited

  // Local-scheme master bookkeeping: an evaluation for this leaf is in
  // flight. Touched by the owning master thread only.
  bool eval_pending = false;

  std::mutex& lock() { return mu_; }

 private:
  friend void expand(TreeNode&, std::span<const double>, bool);

  std::unique_ptr<const State> state_;
  Outcome outcome_;
  TreeNode* parent_;
  int parent_edge_;
  std::atomic<bool> expanded_{false};
  std::mutex mu_;
};

// Arena-owned search tree, built per move and discarded afterwards.
class SearchTree {
 public:
  explicit SearchTree(const State& root_state);

  TreeNode& root() { return *root_; }
  const TreeNode& root() const { return *root_; }

  // Thread-safe node allocation; addresses are stable.
  TreeNode* alloc(std::unique_ptr<const State> state, TreeNode* parent,
                  int parent_edge);

  size_t node_count() const;

  // Structured text dump (node id, parent id, and n/q/p/vl per edge).
  std::string dump() const;

 private:
  mutable std::mutex arena_mu_;
  std::deque<TreeNode> arena_;
  TreeNode* root_ = nullptr;
};

// Eq-style selection score with the virtual-loss adjustment:
//   U = Q_eff + c * P * sqrt(sibling_visit_sum) / (1 + N_eff)
// sibling_visit_sum is the sum of effective visits over all sibling edges.
double uct_score(const EdgeStats& e, double sibling_visit_sum,
                 const UctParams& params);

struct SelectResult {
  TreeNode* leaf = nullptr;
  int depth = 0;  // edges on the root-to-leaf path
};

// Descends from the root by uct argmax (ties to the lowest action index),
// applying one virtual loss per traversed edge, until an unexpanded node or
// terminal state. `locked` selects the shared-tree contract: argmax, virtual
// loss, and child materialization happen under the traversed node's lock.
SelectResult select_path(SearchTree& tree, const UctParams& params,
                         bool locked, const WorkloadEmu& emu = {});

// Initializes edges/children with the given priors over the leaf's legal
// actions (re-normalized; uniform if the sum is not positive). Idempotent:
// a second expand is a no-op. Throws std::invalid_argument on a length
// mismatch.
void expand(TreeNode& leaf, std::span<const double> priors_over_legal,
            bool locked);

// Propagates `value` (from the perspective of the player to move at `leaf`)
// to the root: per edge N += 1, W += signed value, Q = W/N, vl_pending -= 1.
// Throws VirtualLossUnderflow on a select/backup mismatch.
void backup(TreeNode& leaf, double value, bool locked,
            const WorkloadEmu& emu = {});

// Removes one pending virtual loss per edge on the leaf's path without
// recording a visit (used when a selection is abandoned and retried).
void revert_virtual_loss(TreeNode& leaf, bool locked);

// Exact value of a terminal leaf from the perspective of its player to move.
double terminal_value(const TreeNode& leaf);

// Root exploration noise: P <- (1-eps) * P + eps * Dirichlet(alpha).
// Disabled in every default configuration; the base algorithm does not use
// it.
void add_dirichlet_noise(TreeNode& root, double alpha, double eps,
                         std::mt19937_64& rng);

// Number of tree-node locks currently held by this thread. Instrumentation
// for the "no lock held across an evaluator call" contract.
int held_node_locks();

}  // namespace pmcts
