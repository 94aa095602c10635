#pragma once

#include <chrono>
#include <cstdint>

namespace pmcts {

using Clock = std::chrono::steady_clock;
using Duration = std::chrono::nanoseconds;

inline double to_ms(Duration d) {
  return std::chrono::duration<double, std::milli>(d).count();
}
inline double to_us(Duration d) {
  return std::chrono::duration<double, std::micro>(d).count();
}
inline Duration from_ms(double ms) {
  return std::chrono::duration_cast<Duration>(
      std::chrono::duration<double, std::milli>(ms));
}
inline Duration from_us(double us) {
  return std::chrono::duration_cast<Duration>(
      std::chrono::duration<double, std::micro>(us));
}

// Lowers the calling thread's kernel timer slack so short sleeps land close
// to their deadline. Idempotent, cheap to call per thread.
void reduce_timer_slack();

// Blocks until now + d. Never returns early. Short delays (< 100us) spin on
// the monotonic clock; longer ones sleep to an absolute deadline and spin the
// final stretch, so precision holds without burning a core for milliseconds.
// Delays emulate device/memory latency, not compute: concurrent callers must
// overlap even when hardware threads are scarce.
void precise_delay(Duration d);

// Spins unconditionally until now + d. Only for sub-100us calibration paths.
void spin_delay(Duration d);

class StopWatch {
 public:
  StopWatch() : start_(Clock::now()) {}
  Duration elapsed() const { return Clock::now() - start_; }
  double elapsed_ms() const { return to_ms(elapsed()); }
  void reset() { start_ = Clock::now(); }

 private:
  Clock::time_point start_;
};

// splitmix64; used for deterministic content-dependent mock outputs.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a over raw bytes.
uint64_t hash_bytes(const void* data, size_t n, uint64_t seed);

}  // namespace pmcts
