#pragma once

#include <functional>
#include <random>
#include <string>

#include "pmcts/evaluator.hpp"

namespace pmcts {

struct MlpArch {
  int input_size = 0;
  std::vector<int> hidden;  // layer widths
  int actions = 0;

  bool operator==(const MlpArch&) const = default;
};

struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> w;  // row-major, out x in
  std::vector<double> b;  // out
};

// Two-headed multilayer perceptron: tanh hidden layers feeding a policy head
// (softmax logits over the action space) and a value head (single tanh
// scalar). All parameters are doubles so gradient checks are meaningful.
struct NetParams {
  MlpArch arch;
  std::vector<DenseLayer> hidden;
  DenseLayer policy;
  DenseLayer value;

  size_t param_count() const;

  static NetParams zeros(const MlpArch& arch);
  static NetParams randomized(const MlpArch& arch, uint64_t seed,
                              double scale = 0.1);

  // Flat views for generic parameter walks (finite differences, SGD).
  void for_each(const std::function<void(double&)>& f);
  void for_each(const std::function<void(const double&)>& f) const;
};

struct TrainingSample {
  std::vector<double> features;  // encoded state
  std::vector<double> pi;        // visit-count policy over the action space
  double reward = 0.0;           // terminal reward, mover's perspective
};

struct ForwardOut {
  std::vector<double> policy;  // softmax over the full action space
  double value = 0.0;
};

ForwardOut forward(const NetParams& params, std::span<const double> features);

// Masked evaluation for search: illegal actions zeroed, legal mass
// renormalized. Throws std::invalid_argument on a feature-size mismatch.
EvalResult mlp_eval(const NetParams& params, const EvalRequest& req);

// Summed per-sample loss: (value - reward)^2 - pi . log(policy), with the
// policy probabilities clamped below at 1e-10 inside the log.
double loss(const NetParams& params, std::span<const TrainingSample> batch);

// Exact analytic gradient of loss() in a parameter-shaped container.
NetParams grad(const NetParams& params, std::span<const TrainingSample> batch);

// theta - lr * g
NetParams sgd_step(const NetParams& params, const NetParams& g, double lr);

// Versioned JSON checkpoint: architecture descriptor + flat parameter arrays.
void save_checkpoint(const NetParams& params, const std::string& path);
NetParams load_checkpoint(const std::string& path);

class MlpEvaluator final : public Evaluator {
 public:
  explicit MlpEvaluator(std::shared_ptr<const NetParams> params)
      : params_(std::move(params)) {}

  EvalResult evaluate(const EvalRequest& req) const override {
    return mlp_eval(*params_, req);
  }

  const NetParams& params() const { return *params_; }

 private:
  std::shared_ptr<const NetParams> params_;
};

}  // namespace pmcts
