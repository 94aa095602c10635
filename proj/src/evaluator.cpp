#include "pmcts/evaluator.hpp"

namespace pmcts {

EvalRequest EvalRequest::from_state(const State& s, uint64_t ticket) {
  EvalRequest req;
  req.features = s.encode();
  req.legal_mask.assign(static_cast<size_t>(s.action_count()), 0);
  for (ActionId a : s.legal_actions()) req.legal_mask[a] = 1;
  req.ticket = ticket;
  return req;
}

std::vector<EvalResult> Evaluator::evaluate_batch(
    std::span<const EvalRequest> reqs) const {
  std::vector<EvalResult> out;
  out.reserve(reqs.size());
  for (const auto& r : reqs) out.push_back(evaluate(r));
  return out;
}

EvalResult MockEvaluator::compute(uint64_t seed, const EvalRequest& req) {
  EvalResult res;
  res.ticket = req.ticket;
  res.priors.assign(req.legal_mask.size(), 0.0);
  const uint64_t h = hash_bytes(req.features.data(),
                                req.features.size() * sizeof(double), seed);
  double sum = 0.0;
  for (size_t a = 0; a < req.legal_mask.size(); ++a) {
    if (!req.legal_mask[a]) continue;
    const uint64_t ha = mix64(h ^ (static_cast<uint64_t>(a) * 0x9e3779b9ULL));
    // (0, 1]; strictly positive so every legal action keeps a prior
    const double u = (static_cast<double>(ha >> 11) + 1.0) * 0x1.0p-53;
    res.priors[a] = u;
    sum += u;
  }
  if (sum > 0.0) {
    for (auto& p : res.priors) p /= sum;
  }
  const uint64_t hv = mix64(h ^ 0xc2b2ae3d27d4eb4fULL);
  res.value = 2.0 * (static_cast<double>(hv >> 11) * 0x1.0p-53) - 1.0;
  return res;
}

EvalResult MockEvaluator::evaluate(const EvalRequest& req) const {
  precise_delay(latency_);
  return compute(seed_, req);
}

}  // namespace pmcts
