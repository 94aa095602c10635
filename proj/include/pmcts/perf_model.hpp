#pragma once

#include <optional>
#include <string>

#include "pmcts/accel.hpp"

namespace pmcts {

// Design-time profiled latencies feeding the scheme predictors. All values
// are per-rollout amortized single-thread costs except t_shared_access,
// which is the cost of one shared-memory node access.
struct PerfProfile {
  Duration t_select{0};
  Duration t_backup{0};
  Duration t_eval_cpu{0};
  Duration t_shared_access{0};

  bool operator==(const PerfProfile&) const = default;
};

enum class Platform { cpu, accel };
enum class Scheme { shared, local };

const char* scheme_name(Scheme s);
const char* platform_name(Platform p);

struct SchemeChoice {
  Scheme scheme = Scheme::shared;
  std::optional<int> batch;  // set iff platform == accel and scheme == local
  Duration predicted_latency{0};
};

// Latency models. Every prediction is the wall time of one round of N
// parallel rollout slots; amortized per-worker-iteration latency is this
// value divided by N, so comparisons between schemes at equal N are
// unchanged.

// shared tree, CPU evaluation: t_shared_access*N + t_select + t_backup +
// t_eval_cpu
Duration predict_shared_cpu(const PerfProfile& p, int n);

// shared tree, accelerator evaluation at batch = N: the CPU-evaluation term
// replaced with one full-batch transfer + compute.
Duration predict_shared_accel(const PerfProfile& p, int n,
                              const AccelModel& accel);

// local tree, CPU evaluation: max((t_select + t_backup) * N, t_eval_cpu)
Duration predict_local_cpu(const PerfProfile& p, int n);

// local tree, accelerator evaluation at communication batch size B:
// max of the in-tree term, the transfer term ceil(N/B)*L + N/bandwidth, and
// the per-batch compute term compute_time(B).
Duration predict_local_accel(const PerfProfile& p, int n, int batch,
                             const AccelModel& accel);

// Picks the predicted-fastest scheme for the platform; ties go to shared.
// On the accelerator platform the local arm is minimized over B in [1, N]
// (the predicted sequence is a V-sequence, searched with the log-time
// tuner). `accel` must be non-null iff platform == accel.
SchemeChoice choose_scheme(const PerfProfile& p, Platform platform, int n,
                           const AccelModel* accel);

// Structured-text (JSON) serialization; nanosecond-exact round trip.
std::string profile_to_text(const PerfProfile& p);
PerfProfile profile_from_text(const std::string& text);
void save_profile(const PerfProfile& p, const std::string& path);
PerfProfile load_profile(const std::string& path);

}  // namespace pmcts
