#include "pmcts/mlp.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"

namespace pmcts {

namespace {
constexpr double kLogFloor = 1e-10;

DenseLayer make_layer(int in, int out) {
  DenseLayer l;
  l.in = in;
  l.out = out;
  l.w.assign(static_cast<size_t>(in) * out, 0.0);
  l.b.assign(static_cast<size_t>(out), 0.0);
  return l;
}

void affine(const DenseLayer& l, std::span<const double> x,
            std::vector<double>& out) {
  out.assign(static_cast<size_t>(l.out), 0.0);
  for (int r = 0; r < l.out; ++r) {
    double acc = l.b[r];
    const double* wr = l.w.data() + static_cast<size_t>(r) * l.in;
    for (int c = 0; c < l.in; ++c) acc += wr[c] * x[c];
    out[r] = acc;
  }
}

// Accumulates dL/dW, dL/db into g and returns dL/dx.
void affine_backward(const DenseLayer& l, std::span<const double> x,
                     std::span<const double> dout, DenseLayer& g,
                     std::vector<double>& dx) {
  for (int r = 0; r < l.out; ++r) {
    g.b[r] += dout[r];
    double* gw = g.w.data() + static_cast<size_t>(r) * l.in;
    const double* wr = l.w.data() + static_cast<size_t>(r) * l.in;
    for (int c = 0; c < l.in; ++c) {
      gw[c] += dout[r] * x[c];
      dx[c] += dout[r] * wr[c];
    }
  }
}

struct Activations {
  // layer inputs: activations[0] = features, activations[i+1] = tanh output
  // of hidden layer i
  std::vector<std::vector<double>> h;
  std::vector<double> logits;
  std::vector<double> softmax;
  double value_pre = 0.0;  // pre-tanh
  double value = 0.0;
};

Activations run_forward(const NetParams& p, std::span<const double> features) {
  if (static_cast<int>(features.size()) != p.arch.input_size) {
    throw std::invalid_argument("feature size mismatch: got " +
                                std::to_string(features.size()) + ", want " +
                                std::to_string(p.arch.input_size));
  }
  Activations act;
  act.h.emplace_back(features.begin(), features.end());
  std::vector<double> tmp;
  for (const auto& layer : p.hidden) {
    affine(layer, act.h.back(), tmp);
    for (auto& v : tmp) v = std::tanh(v);
    act.h.push_back(tmp);
  }
  affine(p.policy, act.h.back(), act.logits);
  act.softmax.assign(act.logits.size(), 0.0);
  double mx = -std::numeric_limits<double>::infinity();
  for (double z : act.logits) mx = std::max(mx, z);
  double sum = 0.0;
  for (size_t i = 0; i < act.logits.size(); ++i) {
    act.softmax[i] = std::exp(act.logits[i] - mx);
    sum += act.softmax[i];
  }
  for (auto& v : act.softmax) v /= sum;
  std::vector<double> vout;
  affine(p.value, act.h.back(), vout);
  act.value_pre = vout[0];
  act.value = std::tanh(vout[0]);
  return act;
}
}  // namespace

size_t NetParams::param_count() const {
  size_t n = 0;
  for (const auto& l : hidden) n += l.w.size() + l.b.size();
  n += policy.w.size() + policy.b.size();
  n += value.w.size() + value.b.size();
  return n;
}

NetParams NetParams::zeros(const MlpArch& arch) {
  if (arch.input_size <= 0 || arch.actions <= 0) {
    throw std::invalid_argument("bad architecture");
  }
  NetParams p;
  p.arch = arch;
  int in = arch.input_size;
  for (int h : arch.hidden) {
    p.hidden.push_back(make_layer(in, h));
    in = h;
  }
  p.policy = make_layer(in, arch.actions);
  p.value = make_layer(in, 1);
  return p;
}

NetParams NetParams::randomized(const MlpArch& arch, uint64_t seed,
                                double scale) {
  NetParams p = zeros(arch);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  p.for_each([&](double& v) { v = dist(rng); });
  return p;
}

void NetParams::for_each(const std::function<void(double&)>& f) {
  auto walk = [&](DenseLayer& l) {
    for (auto& v : l.w) f(v);
    for (auto& v : l.b) f(v);
  };
  for (auto& l : hidden) walk(l);
  walk(policy);
  walk(value);
}

void NetParams::for_each(const std::function<void(const double&)>& f) const {
  auto walk = [&](const DenseLayer& l) {
    for (const auto& v : l.w) f(v);
    for (const auto& v : l.b) f(v);
  };
  for (const auto& l : hidden) walk(l);
  walk(policy);
  walk(value);
}

ForwardOut forward(const NetParams& params, std::span<const double> features) {
  Activations act = run_forward(params, features);
  return {std::move(act.softmax), act.value};
}

EvalResult mlp_eval(const NetParams& params, const EvalRequest& req) {
  if (req.legal_mask.size() != static_cast<size_t>(params.arch.actions)) {
    throw std::invalid_argument("legal mask size mismatch");
  }
  ForwardOut out = forward(params, req.features);
  EvalResult res;
  res.ticket = req.ticket;
  res.value = out.value;
  res.priors.assign(out.policy.size(), 0.0);
  double sum = 0.0;
  for (size_t a = 0; a < out.policy.size(); ++a) {
    if (req.legal_mask[a]) {
      res.priors[a] = out.policy[a];
      sum += out.policy[a];
    }
  }
  if (sum > 0.0) {
    for (auto& p : res.priors) p /= sum;
  } else {
    // degenerate mass on legal actions; fall back to uniform
    size_t n_legal = 0;
    for (auto m : req.legal_mask) n_legal += m;
    if (n_legal > 0) {
      for (size_t a = 0; a < res.priors.size(); ++a) {
        res.priors[a] = req.legal_mask[a] ? 1.0 / n_legal : 0.0;
      }
    }
  }
  return res;
}

double loss(const NetParams& params, std::span<const TrainingSample> batch) {
  double total = 0.0;
  for (const auto& s : batch) {
    Activations act = run_forward(params, s.features);
    const double dv = act.value - s.reward;
    total += dv * dv;
    for (size_t a = 0; a < s.pi.size(); ++a) {
      if (s.pi[a] != 0.0) {
        total -= s.pi[a] * std::log(std::max(act.softmax[a], kLogFloor));
      }
    }
  }
  return total;
}

NetParams grad(const NetParams& params, std::span<const TrainingSample> batch) {
  NetParams g = NetParams::zeros(params.arch);
  std::vector<double> dh, dh_prev;
  for (const auto& s : batch) {
    Activations act = run_forward(params, s.features);

    // policy head: d/dz of -pi . log softmax(z) = (sum pi) * softmax - pi
    double pi_sum = 0.0;
    for (double v : s.pi) pi_sum += v;
    std::vector<double> dlogits(act.softmax.size());
    for (size_t a = 0; a < act.softmax.size(); ++a) {
      dlogits[a] = pi_sum * act.softmax[a] - s.pi[a];
    }

    // value head: d/du of (tanh(u) - r)^2
    const double dvu =
        2.0 * (act.value - s.reward) * (1.0 - act.value * act.value);

    const auto& top = act.h.back();
    dh.assign(top.size(), 0.0);
    affine_backward(params.policy, top, dlogits, g.policy, dh);
    const double dv_arr[1] = {dvu};
    affine_backward(params.value, top, std::span<const double>(dv_arr, 1),
                    g.value, dh);

    for (int li = static_cast<int>(params.hidden.size()) - 1; li >= 0; --li) {
      // through tanh: dL/du = dL/dh * (1 - h^2)
      const auto& h_out = act.h[li + 1];
      for (size_t i = 0; i < dh.size(); ++i) {
        dh[i] *= 1.0 - h_out[i] * h_out[i];
      }
      dh_prev.assign(act.h[li].size(), 0.0);
      affine_backward(params.hidden[li], act.h[li], dh, g.hidden[li], dh_prev);
      dh.swap(dh_prev);
    }
  }
  return g;
}

NetParams sgd_step(const NetParams& params, const NetParams& g, double lr) {
  NetParams out = params;
  auto step = [lr](DenseLayer& dst, const DenseLayer& src) {
    for (size_t i = 0; i < dst.w.size(); ++i) dst.w[i] -= lr * src.w[i];
    for (size_t i = 0; i < dst.b.size(); ++i) dst.b[i] -= lr * src.b[i];
  };
  for (size_t i = 0; i < out.hidden.size(); ++i) {
    step(out.hidden[i], g.hidden[i]);
  }
  step(out.policy, g.policy);
  step(out.value, g.value);
  return out;
}

namespace {
nlohmann::json layer_to_json(const DenseLayer& l) {
  return {{"in", l.in}, {"out", l.out}, {"w", l.w}, {"b", l.b}};
}

DenseLayer layer_from_json(const nlohmann::json& j) {
  DenseLayer l;
  l.in = j.at("in").get<int>();
  l.out = j.at("out").get<int>();
  l.w = j.at("w").get<std::vector<double>>();
  l.b = j.at("b").get<std::vector<double>>();
  if (l.w.size() != static_cast<size_t>(l.in) * l.out ||
      l.b.size() != static_cast<size_t>(l.out)) {
    throw std::runtime_error("checkpoint layer shape mismatch");
  }
  return l;
}
}  // namespace

void save_checkpoint(const NetParams& params, const std::string& path) {
  nlohmann::json j;
  j["format"] = "pmcts-checkpoint";
  j["version"] = 1;
  j["arch"] = {{"input_size", params.arch.input_size},
               {"hidden", params.arch.hidden},
               {"actions", params.arch.actions}};
  j["hidden"] = nlohmann::json::array();
  for (const auto& l : params.hidden) j["hidden"].push_back(layer_to_json(l));
  j["policy"] = layer_to_json(params.policy);
  j["value"] = layer_to_json(params.value);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << j.dump();
  if (!out.good()) throw std::runtime_error("checkpoint write failed: " + path);
}

NetParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.value("format", "") != "pmcts-checkpoint" || j.value("version", 0) != 1) {
    throw std::runtime_error("unsupported checkpoint format");
  }
  NetParams p;
  p.arch.input_size = j.at("arch").at("input_size").get<int>();
  p.arch.hidden = j.at("arch").at("hidden").get<std::vector<int>>();
  p.arch.actions = j.at("arch").at("actions").get<int>();
  for (const auto& l : j.at("hidden")) p.hidden.push_back(layer_from_json(l));
  p.policy = layer_from_json(j.at("policy"));
  p.value = layer_from_json(j.at("value"));
  return p;
}

}  // namespace pmcts
