#pragma once

#include "pmcts/perf_model.hpp"
#include "pmcts/search_common.hpp"

namespace pmcts {

struct ProfileOptions {
  int fanout = 32;
  int depth_limit = 8;
  int iters = 1000;  // select/backup timing repetitions
  WorkloadEmu emu;   // workload under measurement (same knobs as the schemes)
  // t_shared_access source: explicit override, else pointer-chase
  // microbenchmark (plus any configured emulated root access delay).
  std::optional<Duration> shared_access_override;
  size_t chase_bytes = 64u << 20;
  int chase_steps = 1 << 20;
};

// Measures single-thread select/backup cost on a synthetic tree with the
// given fanout and depth (medians over iters), times single evaluator calls
// on a representative request built from env_state, and derives
// t_shared_access. Run without competing load.
PerfProfile profile(const State& env_state, const Evaluator& evaluator,
                    const ProfileOptions& opts);

// Median latency of one uncached memory access over a working set larger
// than the last-level cache.
Duration pointer_chase_latency(size_t bytes, int steps);

}  // namespace pmcts
