#include "pmcts/synthetic_game.hpp"

#include "pmcts/clock.hpp"

namespace pmcts {

SyntheticState::SyntheticState(int fanout, int depth_limit)
    : fanout_(fanout), limit_(depth_limit) {
  if (fanout < 1 || depth_limit < 1) {
    throw std::invalid_argument("bad fanout/depth_limit");
  }
}

std::unique_ptr<State> SyntheticState::clone() const {
  return std::make_unique<SyntheticState>(*this);
}

std::vector<ActionId> SyntheticState::legal_actions() const {
  std::vector<ActionId> out;
  if (depth_ >= limit_) return out;
  out.reserve(fanout_);
  for (int a = 0; a < fanout_; ++a) out.push_back(a);
  return out;
}

std::unique_ptr<State> SyntheticState::apply(ActionId a) const {
  if (!is_legal(a)) throw IllegalActionError("illegal synthetic action");
  auto next = std::make_unique<SyntheticState>(*this);
  next->depth_ = depth_ + 1;
  next->path_hash_ = mix64(path_hash_ ^ (static_cast<uint64_t>(a) + 1));
  return next;
}

void SyntheticState::encode(std::vector<double>& out) const {
  out.assign(static_cast<size_t>(encoding_size()), 0.0);
  out[0] = static_cast<double>(depth_) / limit_;
  out[1] = (to_move() == 0) ? 1.0 : -1.0;
  uint64_t h = path_hash_;
  for (int i = 2; i < encoding_size(); ++i) {
    h = mix64(h);
    out[i] = static_cast<double>(h >> 11) * 0x1.0p-53;
  }
}

}  // namespace pmcts
