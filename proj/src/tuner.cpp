#include "pmcts/tuner.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "json.hpp"

namespace pmcts {

TuneResult tune_batch(const State& root_state, const LocalSearchConfig& base,
                      const AccelSearchConfig& accel, int n,
                      const Evaluator& evaluator, int repeats) {
  if (n < 1) throw std::invalid_argument("n < 1");
  if (repeats < 1) throw std::invalid_argument("repeats < 1");

  std::map<int, Duration> cache;
  auto measure = [&](int b) -> Duration {
    auto it = cache.find(b);
    if (it != cache.end()) return it->second;
    std::vector<Duration> runs;
    runs.reserve(repeats);
    for (int r = 0; r < repeats; ++r) {
      LocalSearchConfig cfg = base;
      cfg.num_workers = n;
      AccelSearchConfig ac = accel;
      ac.batch = b;
      ac.streams = 0;  // ceil(N/B) streams per batch size probed
      cfg.accel = ac;
      SearchResult res = search_local(root_state, cfg, evaluator);
      runs.push_back(res.stats.move_time / cfg.playouts_per_move);
    }
    std::nth_element(runs.begin(), runs.begin() + runs.size() / 2, runs.end());
    const Duration med = runs[runs.size() / 2];
    cache.emplace(b, med);
    return med;
  };

  TuneResult out;
  out.best_batch =
      find_min([&](int b) { return measure(b).count(); }, 1, n);
  // follow-up probe in case find_min never measured the returned index
  measure(out.best_batch);
  out.records.reserve(cache.size());
  for (const auto& [b, d] : cache) out.records.push_back({b, d});
  return out;
}

ConfigureReport configure(const State& root_state, const Evaluator& evaluator,
                          const ConfigureOptions& opts) {
  if ((opts.platform == Platform::accel) != opts.accel.has_value()) {
    throw std::invalid_argument(
        "accel config must accompany the accel platform");
  }
  ConfigureReport report;
  report.num_workers = opts.num_workers;
  report.platform = opts.platform;
  report.tuner_threshold = opts.tuner_threshold;
  report.repeats = opts.tune_repeats;

  report.profile = profile(root_state, evaluator, opts.profile);

  const AccelModel* accel_model =
      opts.accel ? &opts.accel->model : nullptr;
  const int n = opts.num_workers;

  report.predictions.push_back({Scheme::shared, Platform::cpu, 0,
                                predict_shared_cpu(report.profile, n)});
  report.predictions.push_back({Scheme::local, Platform::cpu, 0,
                                predict_local_cpu(report.profile, n)});
  if (accel_model) {
    report.predictions.push_back(
        {Scheme::shared, Platform::accel, n,
         predict_shared_accel(report.profile, n, *accel_model)});
    for (int b = 1; b <= n; ++b) {
      report.predictions.push_back(
          {Scheme::local, Platform::accel, b,
           predict_local_accel(report.profile, n, b, *accel_model)});
    }
  }

  report.choice = choose_scheme(report.profile, opts.platform, n, accel_model);

  if (opts.platform == Platform::accel &&
      report.choice.scheme == Scheme::local) {
    if (n >= opts.tuner_threshold) {
      LocalSearchConfig base;
      base.playouts_per_move = std::max(opts.playouts_per_move, n);
      base.uct = opts.uct;
      base.emu = opts.emu;
      TuneResult tuned = tune_batch(root_state, base, *opts.accel, n,
                                    evaluator, opts.tune_repeats);
      report.tuned = true;
      report.tune_records = tuned.records;
      report.choice.batch = tuned.best_batch;
    } else if (!report.choice.batch) {
      report.choice.batch = n;
    }
  }
  return report;
}

namespace {
nlohmann::json choice_to_json(const SchemeChoice& c) {
  nlohmann::json j;
  j["scheme"] = scheme_name(c.scheme);
  if (c.batch) j["batch"] = *c.batch;
  j["predicted_latency_ns"] = c.predicted_latency.count();
  return j;
}

SchemeChoice choice_from_json(const nlohmann::json& j) {
  SchemeChoice c;
  c.scheme =
      j.at("scheme").get<std::string>() == "shared" ? Scheme::shared
                                                    : Scheme::local;
  if (j.contains("batch")) c.batch = j.at("batch").get<int>();
  c.predicted_latency = Duration(j.at("predicted_latency_ns").get<int64_t>());
  return c;
}
}  // namespace

std::string report_to_text(const ConfigureReport& r) {
  nlohmann::json j;
  j["format"] = "pmcts-configure-report";
  j["version"] = 1;
  j["profile"] = nlohmann::json::parse(profile_to_text(r.profile));
  j["num_workers"] = r.num_workers;
  j["platform"] = platform_name(r.platform);
  j["predictions"] = nlohmann::json::array();
  for (const auto& row : r.predictions) {
    j["predictions"].push_back({{"scheme", scheme_name(row.scheme)},
                                {"platform", platform_name(row.platform)},
                                {"batch", row.batch},
                                {"predicted_ns", row.predicted.count()}});
  }
  j["choice"] = choice_to_json(r.choice);
  j["tuned"] = r.tuned;
  j["tune_records"] = nlohmann::json::array();
  for (const auto& rec : r.tune_records) {
    j["tune_records"].push_back(
        {{"batch", rec.batch}, {"latency_ns", rec.measured_latency.count()}});
  }
  j["tuner_threshold"] = r.tuner_threshold;
  j["repeats"] = r.repeats;
  return j.dump(2);
}

ConfigureReport report_from_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "pmcts-configure-report") {
    throw std::runtime_error("not a configure report");
  }
  ConfigureReport r;
  r.profile = profile_from_text(j.at("profile").dump());
  r.num_workers = j.at("num_workers").get<int>();
  r.platform = j.at("platform").get<std::string>() == "cpu" ? Platform::cpu
                                                            : Platform::accel;
  for (const auto& row : j.at("predictions")) {
    PredictionRow p;
    p.scheme = row.at("scheme").get<std::string>() == "shared"
                   ? Scheme::shared
                   : Scheme::local;
    p.platform = row.at("platform").get<std::string>() == "cpu"
                     ? Platform::cpu
                     : Platform::accel;
    p.batch = row.at("batch").get<int>();
    p.predicted = Duration(row.at("predicted_ns").get<int64_t>());
    r.predictions.push_back(p);
  }
  r.choice = choice_from_json(j.at("choice"));
  r.tuned = j.at("tuned").get<bool>();
  for (const auto& rec : j.at("tune_records")) {
    r.tune_records.push_back(
        {rec.at("batch").get<int>(),
         Duration(rec.at("latency_ns").get<int64_t>())});
  }
  r.tuner_threshold = j.at("tuner_threshold").get<int>();
  r.repeats = j.at("repeats").get<int>();
  return r;
}

void save_report(const ConfigureReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << report_to_text(r) << "\n";
}

ConfigureReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read report: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return report_from_text(text);
}

}  // namespace pmcts
