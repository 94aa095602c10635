#include "pmcts/scheme_shared.hpp"

#include <atomic>
#include <thread>

namespace pmcts {

namespace {
void check_config(const State& root_state, const SharedSearchConfig& cfg) {
  if (root_state.terminal()) {
    throw std::invalid_argument("search on terminal state");
  }
  if (cfg.num_workers < 1) throw std::invalid_argument("num_workers < 1");
  if (cfg.playouts_per_move < cfg.num_workers) {
    throw std::invalid_argument("playouts_per_move < num_workers");
  }
  if (cfg.uct.c <= 0.0) throw std::invalid_argument("uct.c must be > 0");
}

struct RolloutTracer {
  std::vector<TraceEvent>* events = nullptr;
  Clock::time_point move_start;
  int worker = 0;
  int rollout = 0;

  void record(Phase phase, Clock::time_point t0, int path_len) const {
    if (!events) return;
    events->push_back({worker, rollout, phase, t0 - move_start,
                       Clock::now() - move_start, path_len, 0, ""});
  }
};

// One full rollout against the shared tree.
void threadsafe_rollout(SearchTree& tree, const SharedSearchConfig& cfg,
                        const Evaluator& evaluator,
                        std::atomic<int>& eval_calls, const RolloutTracer& tr,
                        std::vector<RolloutRecord>* rollouts) {
  auto t0 = Clock::now();
  SelectResult sel = select_path(tree, cfg.uct, /*locked=*/true, cfg.emu);
  TreeNode* leaf = sel.leaf;
  tr.record(Phase::select, t0, sel.depth);

  if (leaf->terminal()) {
    const double v = terminal_value(*leaf);
    if (rollouts) rollouts->push_back({path_actions(*leaf), v});
    t0 = Clock::now();
    backup(*leaf, v, /*locked=*/true, cfg.emu);
    tr.record(Phase::backup, t0, sel.depth);
    return;
  }

  if (held_node_locks() != 0) {
    throw std::logic_error("node lock held across an evaluator call");
  }
  t0 = Clock::now();
  EvalResult res = evaluator.evaluate(EvalRequest::from_state(leaf->state()));
  eval_calls.fetch_add(1, std::memory_order_relaxed);
  tr.record(Phase::eval, t0, sel.depth);

  if (rollouts) rollouts->push_back({path_actions(*leaf), res.value});

  t0 = Clock::now();
  expand(*leaf, gather_legal_priors(leaf->state(), res), /*locked=*/true);
  tr.record(Phase::expand, t0, sel.depth);

  t0 = Clock::now();
  backup(*leaf, res.value, /*locked=*/true, cfg.emu);
  tr.record(Phase::backup, t0, sel.depth);
}
}  // namespace

SearchResult search_shared(const State& root_state,
                           const SharedSearchConfig& cfg,
                           const Evaluator& evaluator) {
  check_config(root_state, cfg);
  const auto move_start = Clock::now();

  SearchTree tree(root_state);
  std::atomic<int> eval_calls{0};

  // Expand the root up front so every counted rollout descends through it.
  {
    EvalResult res = evaluator.evaluate(EvalRequest::from_state(root_state));
    eval_calls.fetch_add(1, std::memory_order_relaxed);
    expand(tree.root(), gather_legal_priors(root_state, res),
           /*locked=*/false);
    if (cfg.noise.epsilon > 0.0) {
      std::mt19937_64 rng(cfg.noise.seed);
      add_dirichlet_noise(tree.root(), cfg.noise.alpha, cfg.noise.epsilon,
                          rng);
    }
  }

  const int n = cfg.num_workers;
  std::vector<int> quota(n, cfg.playouts_per_move / n);
  for (int w = 0; w < cfg.playouts_per_move % n; ++w) quota[w] += 1;

  std::atomic<bool> abort{false};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::vector<std::vector<TraceEvent>> worker_traces(n);
  std::vector<std::vector<RolloutRecord>> worker_rollouts(n);

  auto worker_fn = [&](int wid) {
    reduce_timer_slack();
    RolloutTracer tr;
    tr.events = cfg.record_trace ? &worker_traces[wid] : nullptr;
    tr.move_start = move_start;
    tr.worker = wid;
    auto* rollouts = cfg.record_rollouts ? &worker_rollouts[wid] : nullptr;
    for (int r = 0; r < quota[wid]; ++r) {
      if (abort.load(std::memory_order_relaxed)) return;
      tr.rollout = r;
      try {
        threadsafe_rollout(tree, cfg, evaluator, eval_calls, tr, rollouts);
      } catch (...) {
        {
          std::lock_guard<std::mutex> g(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
        abort.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int w = 0; w < n; ++w) pool.emplace_back(worker_fn, w);
  for (auto& t : pool) t.join();

  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("shared-tree move aborted: ") +
                               e.what());
    }
  }

  SearchResult out;
  out.stats.playouts = cfg.playouts_per_move;
  out.stats.move_time = Clock::now() - move_start;
  out.stats.tree_nodes = tree.node_count();
  out.stats.evaluator_calls = eval_calls.load();
  out.stats.per_worker_rollouts = std::move(quota);
  out.action_prior = root_action_prior(tree.root(), root_state.action_count());
  if (cfg.record_trace) {
    out.trace.enabled = true;
    for (auto& ev : worker_traces) {
      out.trace.events.insert(out.trace.events.end(), ev.begin(), ev.end());
    }
  }
  if (cfg.record_rollouts) {
    for (auto& rr : worker_rollouts) {
      out.rollouts.insert(out.rollouts.end(), rr.begin(), rr.end());
    }
  }
  return out;
}

}  // namespace pmcts
