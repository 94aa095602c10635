#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pmcts/bench.hpp"
#include "pmcts/train.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<std::string> scheme;
  std::optional<int> workers;
  std::optional<int> batch;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "JSON run configuration file");
  cmd->add_option("--seed", ov.seed, "override seed");
  cmd->add_option("--scheme", ov.scheme, "override scheme (auto|shared|local)");
  cmd->add_option("--workers", ov.workers, "override worker count");
  cmd->add_option("--batch", ov.batch, "override accelerator batch size");
  cmd->add_option("--out", ov.out_dir, "output directory");
}

pmcts::RunConfig build_config(const Overrides& ov) {
  pmcts::RunConfig cfg;
  if (!ov.config_path.empty()) {
    cfg = pmcts::load_run_config(ov.config_path);
  }
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.scheme) cfg.scheme = *ov.scheme;
  if (ov.workers) {
    cfg.num_workers = *ov.workers;
    if (cfg.playouts_per_move < cfg.num_workers) {
      cfg.playouts_per_move = cfg.num_workers;
    }
  }
  if (ov.batch) cfg.accel_batch = *ov.batch;
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
  pmcts::validate(cfg);
  return cfg;
}

int cmd_profile(const pmcts::RunConfig& cfg) {
  auto state = pmcts::make_initial_state(cfg);
  auto evaluator = pmcts::make_evaluator(cfg);
  pmcts::PerfProfile p = pmcts::profile(
      *state, *evaluator, pmcts::make_profile_options(cfg, *state));
  const std::string text = pmcts::profile_to_text(p);
  std::cout << text << "\n";
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    pmcts::save_profile(p, cfg.out_dir + "/profile.json");
  }
  return kExitOk;
}

int cmd_select_scheme(const pmcts::RunConfig& cfg) {
  auto state = pmcts::make_initial_state(cfg);
  auto evaluator = pmcts::make_evaluator(cfg);
  pmcts::ConfigureOptions opts;
  opts.profile = pmcts::make_profile_options(cfg, *state);
  opts.num_workers = cfg.num_workers;
  opts.platform = cfg.platform == "accel" ? pmcts::Platform::accel
                                          : pmcts::Platform::cpu;
  if (opts.platform == pmcts::Platform::accel) {
    pmcts::AccelSearchConfig ac;
    ac.model = pmcts::make_accel_model(cfg);
    ac.batch = 1;
    ac.streams = cfg.accel_streams;
    ac.mock_device = cfg.accel_mock;
    ac.mock_seed = cfg.seed;
    opts.accel = ac;
  }
  opts.tuner_threshold = cfg.tuner_threshold;
  opts.tune_repeats = cfg.tune_repeats;
  opts.playouts_per_move = cfg.playouts_per_move;
  opts.uct = pmcts::make_uct(cfg);
  opts.emu = pmcts::make_emu(cfg);
  pmcts::ConfigureReport report = pmcts::configure(*state, *evaluator, opts);
  std::cout << pmcts::report_to_text(report) << "\n";
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    pmcts::save_report(report, cfg.out_dir + "/configure_report.json");
  }
  return kExitOk;
}

int cmd_tune_batch(const pmcts::RunConfig& cfg) {
  if (cfg.platform != "accel") {
    throw pmcts::ConfigError("tune-batch requires platform = accel");
  }
  auto state = pmcts::make_initial_state(cfg);
  auto evaluator = pmcts::make_evaluator(cfg);
  pmcts::LocalSearchConfig base;
  base.playouts_per_move = cfg.playouts_per_move;
  base.uct = pmcts::make_uct(cfg);
  base.emu = pmcts::make_emu(cfg);
  pmcts::AccelSearchConfig ac;
  ac.model = pmcts::make_accel_model(cfg);
  ac.batch = 1;
  ac.streams = cfg.accel_streams;
  ac.mock_device = cfg.accel_mock;
  ac.mock_seed = cfg.seed;
  pmcts::TuneResult res = pmcts::tune_batch(
      *state, base, ac, cfg.num_workers, *evaluator, cfg.tune_repeats);
  nlohmann::json j;
  j["best_batch"] = res.best_batch;
  j["records"] = nlohmann::json::array();
  for (const auto& r : res.records) {
    j["records"].push_back({{"batch", r.batch},
                            {"latency_ms", pmcts::to_ms(r.measured_latency)}});
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_bench(const pmcts::RunConfig& cfg) {
  pmcts::BenchOutcome out = pmcts::run_bench(cfg);
  nlohmann::json j;
  j["scheme"] = pmcts::scheme_name(out.resolved.scheme);
  j["batch"] = out.resolved.batch;
  j["moves"] = out.rows.size();
  j["amortized_ms_mean"] = out.amortized_ms_mean;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_train(const pmcts::RunConfig& cfg) {
  pmcts::TrainOutcome out = pmcts::run_train(cfg);
  nlohmann::json j;
  j["scheme"] = pmcts::scheme_name(out.resolved.scheme);
  j["episodes"] = out.episode_loss.size();
  if (!out.episode_loss.empty()) {
    j["first_loss"] = out.episode_loss.front();
    j["final_loss"] = out.episode_loss.back();
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pmcts: parallel MCTS engine with adaptive scheme selection.\n"
      "Metrics CSV columns: timestamp,episode,move,scheme,workers,batch,"
      "move_ms,amortized_ms,samples_per_sec,loss"};
  app.require_subcommand(1);

  Overrides ov;
  auto* profile = app.add_subcommand(
      "profile", "measure in-tree/evaluator latencies and emit a profile");
  auto* select = app.add_subcommand(
      "select-scheme", "profile, evaluate the latency models, pick a scheme");
  auto* tune = app.add_subcommand(
      "tune-batch", "measured batch-size search for local + accelerator");
  auto* bench = app.add_subcommand("bench", "run timed search moves");
  auto* train = app.add_subcommand("train", "self-play training loop");
  for (auto* cmd : {profile, select, tune, bench, train}) {
    add_common(cmd, ov);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    const pmcts::RunConfig cfg = build_config(ov);
    if (profile->parsed()) return cmd_profile(cfg);
    if (select->parsed()) return cmd_select_scheme(cfg);
    if (tune->parsed()) return cmd_tune_batch(cfg);
    if (bench->parsed()) return cmd_bench(cfg);
    if (train->parsed()) return cmd_train(cfg);
    std::cerr << "no subcommand\n";
    return kExitConfig;
  } catch (const pmcts::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
