#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmcts/clock.hpp"

namespace pmcts {

// Invalid or malformed configuration; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  // game
  std::string game = "gomoku";  // gomoku | synthetic
  int board_size = 15;
  int win_length = 5;
  int synthetic_fanout = 16;
  int synthetic_depth = 24;

  // search
  int playouts_per_move = 1600;
  int num_workers = 1;
  std::string platform = "cpu";  // cpu | accel
  std::string scheme = "auto";   // auto | shared | local
  double uct_c = 1.4;
  double virtual_loss = 1.0;
  double dirichlet_alpha = 0.3;
  double dirichlet_epsilon = 0.0;  // 0 disables root noise
  bool block_on_pending = false;

  // evaluator
  std::string evaluator = "mock";  // mock | mlp
  double mock_latency_ms = 0.0;
  std::vector<int> mlp_hidden = {64, 64};
  std::string checkpoint_in;

  // workload emulation (0 = off)
  double select_work_us = 0.0;   // per traversed node
  double backup_work_us = 0.0;   // per updated edge
  double shared_access_us = 0.0;  // per-rollout root access, shared scheme

  // accelerator model
  double accel_launch_ms = 0.0;
  double accel_bandwidth_items_per_sec = 0.0;  // 0 = infinite
  double accel_compute_fixed_ms = 0.0;
  double accel_compute_per_item_ms = 0.0;
  int accel_batch = 0;  // 0 = auto (tuner when applicable, else N)
  int accel_streams = 0;
  int accel_max_streams = 64;
  bool accel_mock = true;

  // profiler
  int profile_fanout = 0;  // 0 = game action count
  int profile_depth = 8;
  int profile_iters = 1000;
  double shared_access_override_us = -1.0;  // < 0: pointer-chase microbench

  // tuner
  int tuner_threshold = 16;
  int tune_repeats = 3;

  // bench
  int bench_moves = 8;

  // training
  int episodes = 200;
  int sgd_iterations = 40;
  double learning_rate = 0.01;
  int train_batch = 64;
  int buffer_capacity = 10000;
  int checkpoint_every = 50;

  uint64_t seed = 1;
  std::string out_dir;  // empty: no files written
};

// Strict JSON loader: unknown keys and type mismatches raise ConfigError.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

// Field-level validation shared by the loader and CLI overrides.
void validate(const RunConfig& cfg);

}  // namespace pmcts
