#include "pmcts/scheme_local.hpp"

#include <unordered_map>

namespace pmcts {

namespace {
void check_config(const State& root_state, const LocalSearchConfig& cfg) {
  if (root_state.terminal()) {
    throw std::invalid_argument("search on terminal state");
  }
  if (cfg.num_workers < 1) throw std::invalid_argument("num_workers < 1");
  if (cfg.playouts_per_move < cfg.num_workers) {
    throw std::invalid_argument("playouts_per_move < num_workers");
  }
  if (cfg.uct.c <= 0.0) throw std::invalid_argument("uct.c must be > 0");
  if (cfg.accel) {
    if (cfg.accel->batch < 1 || cfg.accel->batch > cfg.num_workers) {
      throw std::invalid_argument("accel batch must be in [1, num_workers]");
    }
  }
}

struct MasterLoop {
  SearchTree& tree;
  const LocalSearchConfig& cfg;
  EvalChannel& channel;
  Clock::time_point move_start;
  MoveTrace* trace = nullptr;
  std::vector<RolloutRecord>* rollouts = nullptr;

  std::unordered_map<uint64_t, TreeNode*> pending{};
  uint64_t next_ticket = 1;
  int submitted = 0;
  int completed = 0;
  int in_flight = 0;
  int max_in_flight = 0;
  int provisional = 0;
  int eval_calls = 0;

  void note_block(const char* reason) {
    if (!trace) return;
    trace->events.push_back({-1, completed, Phase::block,
                             Clock::now() - move_start,
                             Clock::now() - move_start, 0, in_flight, reason});
  }

  void apply_result(const EvalResult& res) {
    auto it = pending.find(res.ticket);
    if (it == pending.end()) {
      throw std::logic_error("collected result with unknown ticket");
    }
    TreeNode* leaf = it->second;
    pending.erase(it);
    leaf->eval_pending = false;
    if (rollouts) rollouts->push_back({path_actions(*leaf), res.value});
    const auto t0 = Clock::now();
    expand(*leaf, gather_legal_priors(leaf->state(), res), /*locked=*/false);
    backup(*leaf, res.value, /*locked=*/false, cfg.emu);
    if (trace) {
      trace->events.push_back({-1, completed, Phase::backup,
                               t0 - move_start, Clock::now() - move_start, 0,
                               in_flight, "result"});
    }
    --in_flight;
    ++completed;
  }

  void run() {
    const bool drain_flush = cfg.accel.has_value();
    while (completed < cfg.playouts_per_move) {
      // Alg.-3 master loop: pick up any finished evaluations, then keep
      // generating requests until the pool is saturated.
      while (auto r = channel.try_collect()) apply_result(*r);
      if (completed >= cfg.playouts_per_move) break;

      if (submitted < cfg.playouts_per_move && in_flight < cfg.num_workers) {
        const auto t0 = Clock::now();
        SelectResult sel =
            select_path(tree, cfg.uct, /*locked=*/false, cfg.emu);
        if (trace) {
          trace->events.push_back({-1, submitted, Phase::select,
                                   t0 - move_start, Clock::now() - move_start,
                                   sel.depth, in_flight, ""});
        }
        TreeNode* leaf = sel.leaf;
        if (leaf->terminal()) {
          const double v = terminal_value(*leaf);
          if (rollouts) rollouts->push_back({path_actions(*leaf), v});
          backup(*leaf, v, /*locked=*/false, cfg.emu);
          ++submitted;
          ++completed;
        } else if (leaf->eval_pending) {
          if (cfg.block_on_pending) {
            // Abandon this selection and wait for the expansion to resolve.
            revert_virtual_loss(*leaf, /*locked=*/false);
            note_block("pending");
            apply_result(channel.collect());
          } else {
            if (rollouts) rollouts->push_back({path_actions(*leaf), 0.0});
            backup(*leaf, 0.0, /*locked=*/false, cfg.emu);
            ++provisional;
            ++submitted;
            ++completed;
          }
        } else {
          leaf->eval_pending = true;
          const uint64_t ticket = next_ticket++;
          pending.emplace(ticket, leaf);
          channel.dispatch(EvalRequest::from_state(leaf->state(), ticket));
          ++eval_calls;
          ++in_flight;
          ++submitted;
          max_in_flight = std::max(max_in_flight, in_flight);
        }
      } else {
        if (drain_flush && submitted >= cfg.playouts_per_move) {
          channel.flush();  // partial batches must still run
        }
        note_block(submitted >= cfg.playouts_per_move ? "drain" : "pool_full");
        apply_result(channel.collect());
      }
    }
  }
};
}  // namespace

SearchResult search_local(const State& root_state,
                          const LocalSearchConfig& cfg,
                          const Evaluator& evaluator) {
  check_config(root_state, cfg);
  const auto move_start = Clock::now();

  SearchTree tree(root_state);
  int eval_calls = 0;
  {
    EvalResult res = evaluator.evaluate(EvalRequest::from_state(root_state));
    ++eval_calls;
    expand(tree.root(), gather_legal_priors(root_state, res),
           /*locked=*/false);
    if (cfg.noise.epsilon > 0.0) {
      std::mt19937_64 rng(cfg.noise.seed);
      add_dirichlet_noise(tree.root(), cfg.noise.alpha, cfg.noise.epsilon,
                          rng);
    }
  }

  // Evaluation backend: per-thread workers or the batched accelerator.
  std::unique_ptr<AccelDevice> device;
  std::unique_ptr<EvalChannel> channel;
  Duration pool_busy{0};
  if (cfg.accel) {
    const auto& ac = *cfg.accel;
    if (ac.mock_device) {
      device = std::make_unique<MockAccelDevice>(ac.model, ac.mock_seed);
    } else {
      device = std::make_unique<CpuAccelDevice>(ac.model, evaluator);
    }
    int streams = ac.streams > 0
                      ? ac.streams
                      : (cfg.num_workers + ac.batch - 1) / ac.batch;
    streams = std::min(streams, ac.model.max_streams);
    channel = std::make_unique<AccelChannel>(ac.batch, streams, *device);
  } else {
    channel = std::make_unique<ThreadPoolChannel>(cfg.num_workers, evaluator);
  }

  SearchResult out;
  out.trace.enabled = cfg.record_trace;

  MasterLoop loop{tree, cfg, *channel, move_start,
                  cfg.record_trace ? &out.trace : nullptr,
                  cfg.record_rollouts ? &out.rollouts : nullptr};
  loop.eval_calls = eval_calls;
  loop.run();

  if (auto* pool = dynamic_cast<ThreadPoolChannel*>(channel.get())) {
    pool_busy = pool->total_busy();
  }

  out.stats.playouts = cfg.playouts_per_move;
  out.stats.move_time = Clock::now() - move_start;
  out.stats.tree_nodes = tree.node_count();
  out.stats.evaluator_calls = loop.eval_calls;
  out.stats.max_in_flight = loop.max_in_flight;
  out.stats.provisional_backups = loop.provisional;
  if (out.stats.move_time > Duration::zero() && cfg.num_workers > 0) {
    out.stats.worker_utilization =
        static_cast<double>(pool_busy.count()) /
        (static_cast<double>(out.stats.move_time.count()) * cfg.num_workers);
  }
  out.action_prior = root_action_prior(tree.root(), root_state.action_count());
  return out;
}

}  // namespace pmcts
