#include "pmcts/bench.hpp"

#include <filesystem>

#include "json.hpp"
#include "pmcts/synthetic_game.hpp"

namespace pmcts {

std::unique_ptr<State> make_initial_state(const RunConfig& cfg) {
  if (cfg.game == "synthetic") {
    return std::make_unique<SyntheticState>(cfg.synthetic_fanout,
                                            cfg.synthetic_depth);
  }
  return std::make_unique<GomokuState>(cfg.board_size, cfg.win_length);
}

MlpArch make_arch(const RunConfig& cfg, const State& state) {
  return MlpArch{state.encoding_size(), cfg.mlp_hidden, state.action_count()};
}

std::unique_ptr<Evaluator> make_evaluator(
    const RunConfig& cfg, std::shared_ptr<const NetParams> net) {
  if (cfg.evaluator == "mock") {
    return std::make_unique<MockEvaluator>(cfg.seed,
                                           from_ms(cfg.mock_latency_ms));
  }
  if (!net) {
    auto state = make_initial_state(cfg);
    NetParams params =
        cfg.checkpoint_in.empty()
            ? NetParams::randomized(make_arch(cfg, *state), cfg.seed)
            : load_checkpoint(cfg.checkpoint_in);
    net = std::make_shared<const NetParams>(std::move(params));
  }
  return std::make_unique<MlpEvaluator>(std::move(net));
}

AccelModel make_accel_model(const RunConfig& cfg) {
  AccelModel m;
  m.launch_latency = from_ms(cfg.accel_launch_ms);
  m.bandwidth_items_per_sec =
      cfg.accel_bandwidth_items_per_sec > 0.0
          ? cfg.accel_bandwidth_items_per_sec
          : std::numeric_limits<double>::infinity();
  m.compute_fixed = from_ms(cfg.accel_compute_fixed_ms);
  m.compute_per_item = from_ms(cfg.accel_compute_per_item_ms);
  m.max_streams = cfg.accel_max_streams;
  return m;
}

WorkloadEmu make_emu(const RunConfig& cfg) {
  WorkloadEmu emu;
  emu.select_work_per_node = from_us(cfg.select_work_us);
  emu.backup_work_per_node = from_us(cfg.backup_work_us);
  emu.shared_root_access = from_us(cfg.shared_access_us);
  return emu;
}

UctParams make_uct(const RunConfig& cfg) {
  return UctParams{cfg.uct_c, cfg.virtual_loss};
}

ProfileOptions make_profile_options(const RunConfig& cfg, const State& state) {
  ProfileOptions opts;
  opts.fanout = cfg.profile_fanout > 0 ? cfg.profile_fanout
                                       : state.action_count();
  opts.depth_limit = cfg.profile_depth;
  opts.iters = cfg.profile_iters;
  opts.emu = make_emu(cfg);
  if (cfg.shared_access_override_us >= 0.0) {
    opts.shared_access_override = from_us(cfg.shared_access_override_us);
  }
  return opts;
}

namespace {
AccelSearchConfig make_accel_search(const RunConfig& cfg, int batch) {
  AccelSearchConfig ac;
  ac.model = make_accel_model(cfg);
  ac.batch = batch;
  ac.streams = cfg.accel_streams;
  ac.mock_device = cfg.accel_mock;
  ac.mock_seed = cfg.seed;
  return ac;
}
}  // namespace

ResolvedScheme resolve_scheme(const RunConfig& cfg, const State& state,
                              const Evaluator& evaluator) {
  ResolvedScheme rs;
  const bool accel = cfg.platform == "accel";
  if (cfg.scheme == "shared") {
    rs.scheme = Scheme::shared;
    return rs;
  }
  if (cfg.scheme == "local") {
    rs.scheme = Scheme::local;
    if (accel) {
      rs.batch = cfg.accel_batch > 0
                     ? std::min(cfg.accel_batch, cfg.num_workers)
                     : cfg.num_workers;
    }
    return rs;
  }
  ConfigureOptions opts;
  opts.profile = make_profile_options(cfg, state);
  opts.num_workers = cfg.num_workers;
  opts.platform = accel ? Platform::accel : Platform::cpu;
  if (accel) opts.accel = make_accel_search(cfg, 1);
  opts.tuner_threshold = cfg.tuner_threshold;
  opts.tune_repeats = cfg.tune_repeats;
  opts.playouts_per_move = cfg.playouts_per_move;
  opts.uct = make_uct(cfg);
  opts.emu = make_emu(cfg);
  ConfigureReport report = configure(state, evaluator, opts);
  rs.scheme = report.choice.scheme;
  rs.batch = report.choice.batch.value_or(0);
  rs.report = std::move(report);
  return rs;
}

SearchResult run_move(const RunConfig& cfg, const ResolvedScheme& rs,
                      const State& state, const Evaluator& evaluator) {
  if (rs.scheme == Scheme::shared) {
    SharedSearchConfig sc;
    sc.num_workers = cfg.num_workers;
    sc.playouts_per_move = cfg.playouts_per_move;
    sc.uct = make_uct(cfg);
    sc.emu = make_emu(cfg);
    sc.noise = {cfg.dirichlet_alpha, cfg.dirichlet_epsilon, cfg.seed};
    return search_shared(state, sc, evaluator);
  }
  LocalSearchConfig lc;
  lc.num_workers = cfg.num_workers;
  lc.playouts_per_move = cfg.playouts_per_move;
  lc.uct = make_uct(cfg);
  lc.emu = make_emu(cfg);
  lc.noise = {cfg.dirichlet_alpha, cfg.dirichlet_epsilon, cfg.seed};
  lc.block_on_pending = cfg.block_on_pending;
  if (cfg.platform == "accel") {
    lc.accel = make_accel_search(
        cfg, rs.batch > 0 ? rs.batch : cfg.num_workers);
  }
  return search_local(state, lc, evaluator);
}

namespace {
int argmax_action(const std::vector<double>& prior) {
  int best = 0;
  for (size_t i = 1; i < prior.size(); ++i) {
    if (prior[i] > prior[best]) best = static_cast<int>(i);
  }
  return best;
}

double unix_now() {
  return std::chrono::duration<double>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}
}  // namespace

BenchOutcome run_bench(const RunConfig& cfg) {
  auto evaluator = make_evaluator(cfg);
  auto state = make_initial_state(cfg);
  BenchOutcome out;
  out.resolved = resolve_scheme(cfg, *state, *evaluator);

  int episode = 0;
  double amortized_sum = 0.0;
  for (int m = 0; m < cfg.bench_moves; ++m) {
    if (state->terminal()) {
      state = make_initial_state(cfg);
      ++episode;
    }
    SearchResult res = run_move(cfg, out.resolved, *state, *evaluator);
    MetricsRow row;
    row.timestamp_unix = unix_now();
    row.episode = episode;
    row.move = m;
    row.scheme = scheme_name(out.resolved.scheme);
    row.workers = cfg.num_workers;
    row.batch = out.resolved.batch;
    row.move_ms = to_ms(res.stats.move_time);
    row.amortized_ms = res.stats.amortized_latency_ms();
    out.rows.push_back(row);
    amortized_sum += row.amortized_ms;
    state = state->apply(argmax_action(res.action_prior));
  }
  out.amortized_ms_mean =
      out.rows.empty() ? 0.0 : amortized_sum / out.rows.size();

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_metrics_csv(out.rows, cfg.out_dir + "/bench_metrics.csv");
    nlohmann::json extra;
    extra["command"] = "bench";
    extra["scheme"] = scheme_name(out.resolved.scheme);
    extra["workers"] = cfg.num_workers;
    extra["batch"] = out.resolved.batch;
    extra["playouts_per_move"] = cfg.playouts_per_move;
    write_metrics_summary(out.rows, extra.dump(),
                          cfg.out_dir + "/bench_summary.json");
    if (out.resolved.report) {
      save_report(*out.resolved.report, cfg.out_dir + "/configure_report.json");
    }
  }
  return out;
}

}  // namespace pmcts
