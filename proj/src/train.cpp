#include "pmcts/train.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace pmcts {

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

struct PendingSample {
  TrainingSample sample;
  int mover = 0;
};
}  // namespace

TrainOutcome run_train(const RunConfig& cfg) {
  if (cfg.evaluator != "mlp") {
    throw ConfigError("train requires evaluator.kind = mlp");
  }
  const bool write_files = !cfg.out_dir.empty();
  if (write_files) std::filesystem::create_directories(cfg.out_dir);

  auto initial = make_initial_state(cfg);
  NetParams params =
      cfg.checkpoint_in.empty()
          ? NetParams::randomized(make_arch(cfg, *initial), cfg.seed)
          : load_checkpoint(cfg.checkpoint_in);

  TrainOutcome out;
  {
    auto snapshot = std::make_shared<const NetParams>(params);
    MlpEvaluator eval0(snapshot);
    out.resolved = resolve_scheme(cfg, *initial, eval0);
  }

  ReplayBuffer buffer(static_cast<size_t>(cfg.buffer_capacity));
  std::mt19937_64 rng(cfg.seed);
  StopWatch run_clock;

  std::ofstream loss_csv;
  if (write_files) {
    loss_csv.open(cfg.out_dir + "/loss_log.csv", std::ios::trunc);
    loss_csv << "wall_seconds,loss\n";
  }

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    // one self-play episode with a fixed parameter snapshot
    auto snapshot = std::make_shared<const NetParams>(params);
    MlpEvaluator evaluator(snapshot);

    auto state = initial->clone();
    std::vector<PendingSample> episode_samples;
    Duration search_time{0};
    int move_idx = 0;
    while (!state->terminal()) {
      SearchResult res = run_move(cfg, out.resolved, *state, evaluator);
      search_time += res.stats.move_time;

      PendingSample ps;
      ps.sample.features = state->encode();
      ps.sample.pi = res.action_prior;
      ps.mover = state->to_move();
      episode_samples.push_back(std::move(ps));

      MetricsRow row;
      row.timestamp_unix = unix_now();
      row.episode = ep;
      row.move = move_idx++;
      row.scheme = scheme_name(out.resolved.scheme);
      row.workers = cfg.num_workers;
      row.batch = out.resolved.batch;
      row.move_ms = to_ms(res.stats.move_time);
      row.amortized_ms = res.stats.amortized_latency_ms();
      out.move_rows.push_back(row);

      state = state->apply(argmax_action(res.action_prior));
    }

    // back-fill terminal rewards, sign-adjusted per sample's mover
    const Outcome o = state->outcome();
    for (auto& ps : episode_samples) {
      ps.sample.reward = o.kind == Outcome::Kind::win
                             ? (o.winner == ps.mover ? 1.0 : -1.0)
                             : 0.0;
      buffer.push(std::move(ps.sample));
    }

    const auto train_start = Clock::now();
    double loss_sum = 0.0;
    int loss_count = 0;
    for (int it = 0; it < cfg.sgd_iterations; ++it) {
      auto batch = buffer.sample_batch(static_cast<size_t>(cfg.train_batch),
                                       rng);
      loss_sum += loss(params, batch) / batch.size();
      ++loss_count;
      params = sgd_step(params, grad(params, batch), cfg.learning_rate);
    }
    const Duration train_time = Clock::now() - train_start;
    const double ep_loss = loss_count > 0 ? loss_sum / loss_count
                                          : std::nan("");
    out.episode_loss.push_back(ep_loss);

    const double denom_s =
        std::chrono::duration<double>(search_time + train_time).count();
    MetricsRow ep_row;
    ep_row.timestamp_unix = unix_now();
    ep_row.episode = ep;
    ep_row.move = static_cast<int>(episode_samples.size());
    ep_row.scheme = scheme_name(out.resolved.scheme);
    ep_row.workers = cfg.num_workers;
    ep_row.batch = out.resolved.batch;
    ep_row.move_ms = to_ms(search_time + train_time);
    ep_row.amortized_ms =
        episode_samples.empty()
            ? 0.0
            : to_ms(search_time) /
                  (static_cast<double>(cfg.playouts_per_move) *
                   episode_samples.size());
    ep_row.samples_per_sec =
        denom_s > 0.0 ? episode_samples.size() / denom_s : -1.0;
    ep_row.loss = ep_loss;
    out.episode_rows.push_back(ep_row);

    if (write_files) {
      loss_csv << run_clock.elapsed_ms() / 1000.0 << "," << ep_loss << "\n";
      loss_csv.flush();
      if (!loss_csv.good()) {
        throw std::runtime_error("loss log write failed");
      }
      if ((ep + 1) % cfg.checkpoint_every == 0) {
        save_checkpoint(params, cfg.out_dir + "/checkpoint_ep" +
                                    std::to_string(ep + 1) + ".json");
      }
    }
  }

  if (write_files) {
    save_checkpoint(params, cfg.out_dir + "/checkpoint_final.json");
    write_metrics_csv(out.move_rows, cfg.out_dir + "/train_moves.csv");
    write_metrics_csv(out.episode_rows, cfg.out_dir + "/train_episodes.csv");
    nlohmann::json extra;
    extra["command"] = "train";
    extra["scheme"] = scheme_name(out.resolved.scheme);
    extra["episodes"] = cfg.episodes;
    extra["sgd_iterations"] = cfg.sgd_iterations;
    extra["learning_rate"] = cfg.learning_rate;
    write_metrics_summary(out.episode_rows, extra.dump(),
                          cfg.out_dir + "/train_summary.json");
  }
  out.final_params = std::move(params);
  return out;
}

}  // namespace pmcts
