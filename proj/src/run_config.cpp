#include "pmcts/run_config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

namespace pmcts {

namespace {
using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

template <typename T>
void get_to(const json& j, const char* key, T& dst, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(dst);
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where +
                      ": " + e.what());
  }
}
}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(j,
                 {"game", "search", "evaluator", "emulation", "accel",
                  "profile", "tuner", "bench", "train", "seed", "out_dir"},
                 "config root");

  RunConfig cfg;
  get_to(j, "seed", cfg.seed, "config root");
  get_to(j, "out_dir", cfg.out_dir, "config root");

  if (j.contains("game")) {
    const auto& g = j["game"];
    reject_unknown(g, {"kind", "board_size", "win_length", "fanout", "depth"},
                   "game");
    get_to(g, "kind", cfg.game, "game");
    get_to(g, "board_size", cfg.board_size, "game");
    get_to(g, "win_length", cfg.win_length, "game");
    get_to(g, "fanout", cfg.synthetic_fanout, "game");
    get_to(g, "depth", cfg.synthetic_depth, "game");
  }
  if (j.contains("search")) {
    const auto& s = j["search"];
    reject_unknown(s,
                   {"playouts_per_move", "workers", "platform", "scheme",
                    "uct_c", "virtual_loss", "dirichlet_alpha",
                    "dirichlet_epsilon", "block_on_pending"},
                   "search");
    get_to(s, "playouts_per_move", cfg.playouts_per_move, "search");
    get_to(s, "workers", cfg.num_workers, "search");
    get_to(s, "platform", cfg.platform, "search");
    get_to(s, "scheme", cfg.scheme, "search");
    get_to(s, "uct_c", cfg.uct_c, "search");
    get_to(s, "virtual_loss", cfg.virtual_loss, "search");
    get_to(s, "dirichlet_alpha", cfg.dirichlet_alpha, "search");
    get_to(s, "dirichlet_epsilon", cfg.dirichlet_epsilon, "search");
    get_to(s, "block_on_pending", cfg.block_on_pending, "search");
  }
  if (j.contains("evaluator")) {
    const auto& e = j["evaluator"];
    reject_unknown(e, {"kind", "mock_latency_ms", "hidden", "checkpoint"},
                   "evaluator");
    get_to(e, "kind", cfg.evaluator, "evaluator");
    get_to(e, "mock_latency_ms", cfg.mock_latency_ms, "evaluator");
    get_to(e, "hidden", cfg.mlp_hidden, "evaluator");
    get_to(e, "checkpoint", cfg.checkpoint_in, "evaluator");
  }
  if (j.contains("emulation")) {
    const auto& e = j["emulation"];
    reject_unknown(
        e, {"select_work_us", "backup_work_us", "shared_access_us"},
        "emulation");
    get_to(e, "select_work_us", cfg.select_work_us, "emulation");
    get_to(e, "backup_work_us", cfg.backup_work_us, "emulation");
    get_to(e, "shared_access_us", cfg.shared_access_us, "emulation");
  }
  if (j.contains("accel")) {
    const auto& a = j["accel"];
    reject_unknown(a,
                   {"launch_ms", "bandwidth_items_per_sec", "compute_fixed_ms",
                    "compute_per_item_ms", "batch", "streams", "max_streams",
                    "mock"},
                   "accel");
    get_to(a, "launch_ms", cfg.accel_launch_ms, "accel");
    get_to(a, "bandwidth_items_per_sec", cfg.accel_bandwidth_items_per_sec,
           "accel");
    get_to(a, "compute_fixed_ms", cfg.accel_compute_fixed_ms, "accel");
    get_to(a, "compute_per_item_ms", cfg.accel_compute_per_item_ms, "accel");
    get_to(a, "batch", cfg.accel_batch, "accel");
    get_to(a, "streams", cfg.accel_streams, "accel");
    get_to(a, "max_streams", cfg.accel_max_streams, "accel");
    get_to(a, "mock", cfg.accel_mock, "accel");
  }
  if (j.contains("profile")) {
    const auto& p = j["profile"];
    reject_unknown(p,
                   {"fanout", "depth", "iters", "shared_access_override_us"},
                   "profile");
    get_to(p, "fanout", cfg.profile_fanout, "profile");
    get_to(p, "depth", cfg.profile_depth, "profile");
    get_to(p, "iters", cfg.profile_iters, "profile");
    get_to(p, "shared_access_override_us", cfg.shared_access_override_us,
           "profile");
  }
  if (j.contains("tuner")) {
    const auto& t = j["tuner"];
    reject_unknown(t, {"threshold", "repeats"}, "tuner");
    get_to(t, "threshold", cfg.tuner_threshold, "tuner");
    get_to(t, "repeats", cfg.tune_repeats, "tuner");
  }
  if (j.contains("bench")) {
    const auto& b = j["bench"];
    reject_unknown(b, {"moves"}, "bench");
    get_to(b, "moves", cfg.bench_moves, "bench");
  }
  if (j.contains("train")) {
    const auto& t = j["train"];
    reject_unknown(t,
                   {"episodes", "sgd_iterations", "learning_rate", "batch",
                    "buffer_capacity", "checkpoint_every"},
                   "train");
    get_to(t, "episodes", cfg.episodes, "train");
    get_to(t, "sgd_iterations", cfg.sgd_iterations, "train");
    get_to(t, "learning_rate", cfg.learning_rate, "train");
    get_to(t, "batch", cfg.train_batch, "train");
    get_to(t, "buffer_capacity", cfg.buffer_capacity, "train");
    get_to(t, "checkpoint_every", cfg.checkpoint_every, "train");
  }
  validate(cfg);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_run_config(text);
}

void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (cfg.game != "gomoku" && cfg.game != "synthetic") {
    fail("game.kind must be gomoku or synthetic");
  }
  if (cfg.board_size < 2 || cfg.board_size > 64) fail("bad board_size");
  if (cfg.win_length < 2 || cfg.win_length > cfg.board_size) {
    fail("bad win_length");
  }
  if (cfg.synthetic_fanout < 1 || cfg.synthetic_depth < 1) {
    fail("bad synthetic fanout/depth");
  }
  if (cfg.num_workers < 1) fail("workers must be >= 1");
  if (cfg.playouts_per_move < cfg.num_workers) {
    fail("playouts_per_move must be >= workers");
  }
  if (cfg.platform != "cpu" && cfg.platform != "accel") {
    fail("platform must be cpu or accel");
  }
  if (cfg.scheme != "auto" && cfg.scheme != "shared" && cfg.scheme != "local") {
    fail("scheme must be auto, shared, or local");
  }
  if (cfg.uct_c <= 0.0) fail("uct_c must be > 0");
  if (cfg.virtual_loss < 0.0) fail("virtual_loss must be >= 0");
  if (cfg.evaluator != "mock" && cfg.evaluator != "mlp") {
    fail("evaluator.kind must be mock or mlp");
  }
  if (cfg.mock_latency_ms < 0.0) fail("mock_latency_ms must be >= 0");
  for (int h : cfg.mlp_hidden) {
    if (h < 1) fail("hidden layer sizes must be >= 1");
  }
  if (cfg.select_work_us < 0 || cfg.backup_work_us < 0 ||
      cfg.shared_access_us < 0) {
    fail("emulation delays must be >= 0");
  }
  if (cfg.accel_launch_ms < 0 || cfg.accel_compute_fixed_ms < 0 ||
      cfg.accel_compute_per_item_ms < 0 ||
      cfg.accel_bandwidth_items_per_sec < 0) {
    fail("accel model parameters must be >= 0");
  }
  if (cfg.accel_batch < 0 || cfg.accel_batch > cfg.num_workers) {
    fail("accel batch must be in [0, workers]");
  }
  if (cfg.accel_max_streams < 1) fail("max_streams must be >= 1");
  if (cfg.profile_fanout < 0 || cfg.profile_depth < 1 ||
      cfg.profile_iters < 1) {
    fail("bad profile options");
  }
  if (cfg.tuner_threshold < 1 || cfg.tune_repeats < 1) {
    fail("bad tuner options");
  }
  if (cfg.bench_moves < 1) fail("bench moves must be >= 1");
  if (cfg.episodes < 1 || cfg.sgd_iterations < 0 || cfg.train_batch < 1 ||
      cfg.buffer_capacity < 1 || cfg.checkpoint_every < 1) {
    fail("bad training options");
  }
  if (cfg.learning_rate < 0.0) fail("learning_rate must be >= 0");
}

}  // namespace pmcts
