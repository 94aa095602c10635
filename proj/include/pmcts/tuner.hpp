#pragma once

#include <functional>

#include "pmcts/perf_model.hpp"
#include "pmcts/profiler.hpp"
#include "pmcts/scheme_local.hpp"

namespace pmcts {

// V-sequence argmin by paired probes, O(log(hi-lo+1)) levels with two
// measure calls each. If T[mid] >= T[mid+1] the minimum cannot lie left of
// mid+1 (on a V-sequence), so recurse right; otherwise recurse left. Ties
// recurse right. Behavior on non-V inputs is unspecified.
template <typename MeasureFn>
int find_min(MeasureFn&& measure, int lo, int hi) {
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (measure(mid) >= measure(mid + 1)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

struct TuneRecord {
  int batch = 0;
  Duration measured_latency{0};  // amortized per-worker-iteration
};

struct TuneResult {
  int best_batch = 0;
  std::vector<TuneRecord> records;  // one per distinct probed batch size
};

// Measured batch-size search for the local scheme on an accelerator:
// measure(B) runs one full move at batch B and returns move time divided by
// the playout budget; each distinct B is measured `repeats` times and the
// median is cached, so re-probes are consistent and free. The evaluator
// expands the root and backs the real-compute device when configured.
TuneResult tune_batch(const State& root_state, const LocalSearchConfig& base,
                      const AccelSearchConfig& accel, int n,
                      const Evaluator& evaluator, int repeats = 3);

struct PredictionRow {
  Scheme scheme = Scheme::shared;
  Platform platform = Platform::cpu;
  int batch = 0;  // 0 when not applicable
  Duration predicted{0};
};

struct ConfigureReport {
  PerfProfile profile;
  int num_workers = 0;
  Platform platform = Platform::cpu;
  std::vector<PredictionRow> predictions;
  SchemeChoice choice;
  bool tuned = false;  // measured batch tuning ran
  std::vector<TuneRecord> tune_records;
  int tuner_threshold = 16;
  int repeats = 3;
};

struct ConfigureOptions {
  ProfileOptions profile;
  int num_workers = 1;
  Platform platform = Platform::cpu;
  std::optional<AccelSearchConfig> accel;  // required when platform == accel
  // Measured tuning only runs at or above this worker count; below it the
  // batch is N.
  int tuner_threshold = 16;
  int tune_repeats = 3;
  // Move shape for tuning runs.
  int playouts_per_move = 256;
  UctParams uct;
  WorkloadEmu emu;
};

// Design-time pipeline: profile -> evaluate models -> pick scheme -> (local
// + accelerator + N >= threshold) measured batch tuning.
ConfigureReport configure(const State& root_state, const Evaluator& evaluator,
                          const ConfigureOptions& opts);

// JSON round trip for the full report.
std::string report_to_text(const ConfigureReport& r);
ConfigureReport report_from_text(const std::string& text);
void save_report(const ConfigureReport& r, const std::string& path);
ConfigureReport load_report(const std::string& path);

}  // namespace pmcts
