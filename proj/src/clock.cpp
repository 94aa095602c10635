#include "pmcts/clock.hpp"

#include <ctime>

#ifdef __linux__
#include <sys/prctl.h>
#endif

namespace pmcts {

namespace {
thread_local bool g_slack_reduced = false;

constexpr Duration kSpinThreshold = std::chrono::microseconds(100);
constexpr Duration kSleepMargin = std::chrono::microseconds(80);

void spin_until(Clock::time_point deadline) {
  while (Clock::now() < deadline) {
    // keep the loop body non-empty so it is not optimized away
#if defined(__x86_64__) || defined(__i386__)
    __builtin_ia32_pause();
#endif
  }
}
}  // namespace

void reduce_timer_slack() {
  if (g_slack_reduced) return;
#ifdef __linux__
  prctl(PR_SET_TIMERSLACK, 1000UL, 0, 0, 0);  // 1us
#endif
  g_slack_reduced = true;
}

void spin_delay(Duration d) {
  if (d <= Duration::zero()) return;
  spin_until(Clock::now() + d);
}

void precise_delay(Duration d) {
  if (d <= Duration::zero()) return;
  const auto deadline = Clock::now() + d;
  if (d >= kSpinThreshold) {
    reduce_timer_slack();
    const auto sleep_until = deadline - kSleepMargin;
#ifdef __linux__
    timespec ts;
    auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                  sleep_until.time_since_epoch())
                  .count();
    ts.tv_sec = ns / 1000000000LL;
    ts.tv_nsec = ns % 1000000000LL;
    // steady_clock is CLOCK_MONOTONIC on Linux
    while (clock_nanosleep(CLOCK_MONOTONIC, TIMER_ABSTIME, &ts, nullptr) != 0 &&
           Clock::now() < sleep_until) {
    }
#else
    std::this_thread::sleep_until(sleep_until);
#endif
  }
  spin_until(deadline);
}

uint64_t hash_bytes(const void* data, size_t n, uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 1469598103934665603ULL ^ mix64(seed);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace pmcts
