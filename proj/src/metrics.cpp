#include "pmcts/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pmcts {

const char* const kMetricsHeader =
    "timestamp,episode,move,scheme,workers,batch,move_ms,amortized_ms,"
    "samples_per_sec,loss";

namespace {
std::string fmt(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

double percentile(std::vector<double>& v, double q) {
  if (v.empty()) return 0.0;
  const size_t k = static_cast<size_t>(q * (v.size() - 1) + 0.5);
  std::nth_element(v.begin(), v.begin() + k, v.end());
  return v[k];
}
}  // namespace

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream os;
  os << kMetricsHeader << "\n";
  for (const auto& r : rows) {
    os << fmt(r.timestamp_unix) << ',' << r.episode << ',' << r.move << ','
       << r.scheme << ',' << r.workers << ','
       << (r.batch > 0 ? std::to_string(r.batch) : "") << ','
       << fmt(r.move_ms) << ',' << fmt(r.amortized_ms) << ','
       << (r.samples_per_sec >= 0 ? fmt(r.samples_per_sec) : "") << ','
       << (std::isnan(r.loss) ? "" : fmt(r.loss)) << '\n';
  }
  return os.str();
}

void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write metrics: " + path);
  out << metrics_to_csv(rows);
}

std::string metrics_summary_json(const std::vector<MetricsRow>& rows,
                                 const std::string& extra) {
  std::vector<double> amortized;
  double total_move_ms = 0.0;
  amortized.reserve(rows.size());
  for (const auto& r : rows) {
    amortized.push_back(r.amortized_ms);
    total_move_ms += r.move_ms;
  }
  nlohmann::json j;
  j["rows"] = rows.size();
  j["total_move_ms"] = total_move_ms;
  std::vector<double> tmp = amortized;
  j["amortized_ms_p50"] = percentile(tmp, 0.5);
  tmp = amortized;
  j["amortized_ms_p90"] = percentile(tmp, 0.9);
  if (!amortized.empty()) {
    double mean = 0.0;
    for (double v : amortized) mean += v;
    j["amortized_ms_mean"] = mean / amortized.size();
  }
  if (!extra.empty()) j["run"] = nlohmann::json::parse(extra);
  return j.dump(2);
}

void write_metrics_summary(const std::vector<MetricsRow>& rows,
                           const std::string& extra, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write summary: " + path);
  out << metrics_summary_json(rows, extra) << "\n";
}

}  // namespace pmcts
