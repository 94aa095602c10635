#pragma once

#include "pmcts/game.hpp"

namespace pmcts {

// Stand-in environment for performance work: every state has `fanout` legal
// actions and becomes a terminal draw at `depth_limit` plies. Mirrors the
// synthetic-tree setup the profiler uses, so benchmarks can dial tree shape
// independently of game rules.
class SyntheticState final : public State {
 public:
  SyntheticState(int fanout, int depth_limit);

  std::unique_ptr<State> clone() const override;
  int action_count() const override { return fanout_; }
  int to_move() const override { return depth_ & 1; }
  int move_count() const override { return depth_; }
  Outcome outcome() const override {
    return depth_ >= limit_ ? Outcome::draw() : Outcome::ongoing();
  }
  std::vector<ActionId> legal_actions() const override;
  bool is_legal(ActionId a) const override {
    return depth_ < limit_ && a >= 0 && a < fanout_;
  }
  std::unique_ptr<State> apply(ActionId a) const override;

  int encoding_size() const override { return 8; }
  void encode(std::vector<double>& out) const override;

  int depth() const { return depth_; }

 private:
  int fanout_;
  int limit_;
  int depth_ = 0;
  uint64_t path_hash_ = 0x9d39247e33776d41ULL;
};

}  // namespace pmcts
