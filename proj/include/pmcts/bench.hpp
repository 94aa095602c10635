#pragma once

#include "pmcts/metrics.hpp"
#include "pmcts/mlp.hpp"
#include "pmcts/run_config.hpp"
#include "pmcts/scheme_local.hpp"
#include "pmcts/scheme_shared.hpp"
#include "pmcts/tuner.hpp"

namespace pmcts {

// Shared runner machinery between the CLI subcommands and in-process tests.

std::unique_ptr<State> make_initial_state(const RunConfig& cfg);

// Builds the configured evaluator. For the mlp kind, `net` supplies the
// parameter snapshot (randomly initialized from the seed when absent and no
// checkpoint is configured).
std::unique_ptr<Evaluator> make_evaluator(
    const RunConfig& cfg, std::shared_ptr<const NetParams> net = nullptr);

AccelModel make_accel_model(const RunConfig& cfg);
WorkloadEmu make_emu(const RunConfig& cfg);
UctParams make_uct(const RunConfig& cfg);
ProfileOptions make_profile_options(const RunConfig& cfg, const State& state);
MlpArch make_arch(const RunConfig& cfg, const State& state);

struct ResolvedScheme {
  Scheme scheme = Scheme::shared;
  int batch = 0;  // accel-local only; 0 = n/a
  std::optional<ConfigureReport> report;  // present when resolved via auto
};

// scheme=auto runs the configure() pipeline; explicit schemes pass through
// (accel batch defaults to min(N, configured batch or N)).
ResolvedScheme resolve_scheme(const RunConfig& cfg, const State& state,
                              const Evaluator& evaluator);

// One move under the resolved scheme.
SearchResult run_move(const RunConfig& cfg, const ResolvedScheme& rs,
                      const State& state, const Evaluator& evaluator);

struct BenchOutcome {
  ResolvedScheme resolved;
  std::vector<MetricsRow> rows;  // one per benched move
  double amortized_ms_mean = 0.0;
};

// Runs cfg.bench_moves searches along a played trajectory (new game on
// terminal), emitting one metrics row per move. Writes metrics CSV + summary
// into cfg.out_dir when set.
BenchOutcome run_bench(const RunConfig& cfg);

}  // namespace pmcts
