#include "pmcts/profiler.hpp"

#include <algorithm>
#include <numeric>

#include "pmcts/synthetic_game.hpp"

namespace pmcts {

namespace {
Duration median(std::vector<Duration>& v) {
  if (v.empty()) return Duration::zero();
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

// Builds a chain of `depth` expanded nodes over a synthetic game whose
// terminal depth equals `depth`. Edge statistics are randomized but rigged
// so selection always walks the full chain: off-chain edges carry heavy
// visit counts with Q near -1, which keeps both their exploitation and
// exploration terms below the chain edge's score no matter how many timing
// iterations run.
void build_chain(SearchTree& tree, int fanout, int depth,
                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> qjit(-1.0, -0.9);
  std::uniform_int_distribution<int> njit(900, 1100);
  TreeNode* node = &tree.root();
  for (int level = 0; level < depth; ++level) {
    std::vector<double> priors(static_cast<size_t>(fanout),
                               fanout > 1 ? 0.1 / (fanout - 1) : 1.0);
    priors[0] = fanout > 1 ? 0.9 : 1.0;
    expand(*node, priors, /*locked=*/false);
    for (size_t i = 0; i < node->edges.size(); ++i) {
      auto& e = node->edges[i];
      if (i == 0) {
        e.n = 1;
        e.w = 1.0;
      } else {
        e.n = njit(rng);
        e.w = qjit(rng) * e.n;
      }
      e.q = e.w / e.n;
    }
    node->children[0] = tree.alloc(node->state().apply(node->edges[0].action),
                                   node, 0);
    node = node->children[0];
  }
}
}  // namespace

Duration pointer_chase_latency(size_t bytes, int steps) {
  const size_t n = std::max<size_t>(bytes / sizeof(uint32_t), 1024);
  std::vector<uint32_t> next(n);
  std::iota(next.begin(), next.end(), 0u);
  // Sattolo shuffle: one full cycle through the working set.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  for (size_t i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<size_t> pick(0, i - 1);
    std::swap(next[i], next[pick(rng)]);
  }
  uint32_t idx = 0;
  // warmup
  for (int i = 0; i < 1024; ++i) idx = next[idx];
  const auto t0 = Clock::now();
  for (int i = 0; i < steps; ++i) idx = next[idx];
  const auto dt = Clock::now() - t0;
  // keep the chase alive
  if (idx == 0xffffffffu) return Duration::zero();
  return Duration(dt.count() / std::max(steps, 1));
}

PerfProfile profile(const State& env_state, const Evaluator& evaluator,
                    const ProfileOptions& opts) {
  if (opts.iters < 1 || opts.fanout < 1 || opts.depth_limit < 1) {
    throw std::invalid_argument("bad profile options");
  }
  PerfProfile out;

  // In-tree timing on the synthetic tree. The chain leaf is terminal, so the
  // tree shape is invariant across iterations.
  {
    SyntheticState synth_root(opts.fanout, opts.depth_limit);
    SearchTree tree(synth_root);
    std::mt19937_64 rng(0x51ed270b7a2cf1a5ULL);
    build_chain(tree, opts.fanout, opts.depth_limit, rng);
    UctParams params;
    std::vector<Duration> sel_samples;
    std::vector<Duration> back_samples;
    sel_samples.reserve(opts.iters);
    back_samples.reserve(opts.iters);
    for (int i = 0; i < opts.iters; ++i) {
      const auto t0 = Clock::now();
      SelectResult sel = select_path(tree, params, /*locked=*/false, opts.emu);
      const auto t1 = Clock::now();
      backup(*sel.leaf, 0.0, /*locked=*/false, opts.emu);
      const auto t2 = Clock::now();
      sel_samples.push_back(t1 - t0);
      back_samples.push_back(t2 - t1);
    }
    out.t_select = median(sel_samples);
    out.t_backup = median(back_samples);
  }

  // Single-call evaluator timing on a representative request. Capped so
  // slow evaluators do not stall the workflow; medians stay odd-sized.
  {
    const EvalRequest req = EvalRequest::from_state(env_state);
    std::vector<Duration> samples;
    const int max_calls = std::clamp(opts.iters / 10, 5, 51);
    StopWatch budget;
    for (int i = 0; i < max_calls; ++i) {
      const auto t0 = Clock::now();
      (void)evaluator.evaluate(req);
      samples.push_back(Clock::now() - t0);
      if (budget.elapsed() > std::chrono::milliseconds(250) &&
          samples.size() >= 5) {
        break;
      }
    }
    out.t_eval_cpu = median(samples);
  }

  if (opts.shared_access_override) {
    out.t_shared_access = *opts.shared_access_override;
  } else {
    out.t_shared_access =
        pointer_chase_latency(opts.chase_bytes, opts.chase_steps);
  }
  // An emulated root-access delay is part of the shared scheme's workload;
  // fold it into the access latency the models see.
  out.t_shared_access += opts.emu.shared_root_access;
  return out;
}

}  // namespace pmcts
