#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace pmcts {

// One emitted measurement row. Negative samples_per_sec and NaN loss mean
// "not applicable" and serialize as empty CSV cells.
struct MetricsRow {
  double timestamp_unix = 0.0;  // seconds
  int episode = 0;
  int move = 0;
  std::string scheme;
  int workers = 0;
  int batch = 0;  // 0 = n/a
  double move_ms = 0.0;
  double amortized_ms = 0.0;  // move_ms / playouts_per_move
  double samples_per_sec = -1.0;
  double loss = std::nan("");
};

// Column order is stable:
// timestamp,episode,move,scheme,workers,batch,move_ms,amortized_ms,
// samples_per_sec,loss
extern const char* const kMetricsHeader;

std::string metrics_to_csv(const std::vector<MetricsRow>& rows);
void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::string& path);

// JSON sidecar with amortized-latency percentiles and totals; `extra` (JSON
// object text, may be empty) is merged in under "run".
std::string metrics_summary_json(const std::vector<MetricsRow>& rows,
                                 const std::string& extra);
void write_metrics_summary(const std::vector<MetricsRow>& rows,
                           const std::string& extra, const std::string& path);

}  // namespace pmcts
