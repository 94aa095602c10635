#include "pmcts/perf_model.hpp"

#include <fstream>

#include "json.hpp"
#include "pmcts/tuner.hpp"

namespace pmcts {

const char* scheme_name(Scheme s) {
  return s == Scheme::shared ? "shared" : "local";
}

const char* platform_name(Platform p) {
  return p == Platform::cpu ? "cpu" : "accel";
}

Duration predict_shared_cpu(const PerfProfile& p, int n) {
  if (n < 1) throw std::invalid_argument("n < 1");
  return p.t_shared_access * n + p.t_select + p.t_backup + p.t_eval_cpu;
}

Duration predict_shared_accel(const PerfProfile& p, int n,
                              const AccelModel& accel) {
  if (n < 1) throw std::invalid_argument("n < 1");
  return p.t_shared_access * n + p.t_select + p.t_backup +
         accel.full_batch_time(n);
}

Duration predict_local_cpu(const PerfProfile& p, int n) {
  if (n < 1) throw std::invalid_argument("n < 1");
  return std::max((p.t_select + p.t_backup) * n, p.t_eval_cpu);
}

Duration predict_local_accel(const PerfProfile& p, int n, int batch,
                             const AccelModel& accel) {
  if (n < 1) throw std::invalid_argument("n < 1");
  if (batch < 1 || batch > n) {
    throw std::domain_error("batch size out of [1, N]");
  }
  const Duration in_tree = (p.t_select + p.t_backup) * n;
  const Duration transfer = accel.transfer_total(batch, n);
  const Duration compute = accel.compute_time(batch);
  return std::max(in_tree, std::max(transfer, compute));
}

SchemeChoice choose_scheme(const PerfProfile& p, Platform platform, int n,
                           const AccelModel* accel) {
  if ((platform == Platform::accel) != (accel != nullptr)) {
    throw std::invalid_argument("accel model must accompany accel platform");
  }
  SchemeChoice choice;
  if (platform == Platform::cpu) {
    const Duration s = predict_shared_cpu(p, n);
    const Duration l = predict_local_cpu(p, n);
    choice.scheme = (s <= l) ? Scheme::shared : Scheme::local;
    choice.predicted_latency = std::min(s, l);
  } else {
    const Duration s = predict_shared_accel(p, n, *accel);
    const int best_b = find_min(
        [&](int b) { return predict_local_accel(p, n, b, *accel); }, 1, n);
    const Duration l = predict_local_accel(p, n, best_b, *accel);
    if (s <= l) {
      choice.scheme = Scheme::shared;
      choice.predicted_latency = s;
    } else {
      choice.scheme = Scheme::local;
      choice.batch = best_b;
      choice.predicted_latency = l;
    }
  }
  return choice;
}

std::string profile_to_text(const PerfProfile& p) {
  nlohmann::json j;
  j["format"] = "pmcts-profile";
  j["version"] = 1;
  j["t_select_ns"] = p.t_select.count();
  j["t_backup_ns"] = p.t_backup.count();
  j["t_eval_cpu_ns"] = p.t_eval_cpu.count();
  j["t_shared_access_ns"] = p.t_shared_access.count();
  return j.dump(2);
}

PerfProfile profile_from_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "pmcts-profile") {
    throw std::runtime_error("not a profile file");
  }
  PerfProfile p;
  p.t_select = Duration(j.at("t_select_ns").get<int64_t>());
  p.t_backup = Duration(j.at("t_backup_ns").get<int64_t>());
  p.t_eval_cpu = Duration(j.at("t_eval_cpu_ns").get<int64_t>());
  p.t_shared_access = Duration(j.at("t_shared_access_ns").get<int64_t>());
  return p;
}

void save_profile(const PerfProfile& p, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write profile: " + path);
  out << profile_to_text(p) << "\n";
}

PerfProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read profile: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return profile_from_text(text);
}

}  // namespace pmcts
