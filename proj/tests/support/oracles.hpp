#pragma once

// Independent reference implementations used as test oracles. These must not
// share logic with the code under test: the line scanner re-derives outcomes
// from raw cells, and the reference MCTS is a from-scratch single-threaded
// engine with its own node representation.

#include <random>
#include <vector>

#include "pmcts/game.hpp"
#include "pmcts/mlp.hpp"
#include "pmcts/search_common.hpp"

namespace oracles {

// Exhaustive 4-direction line scan over every cell.
pmcts::Outcome line_scan_outcome(const pmcts::GomokuState& s);

struct RefTrace {
  std::vector<pmcts::RolloutRecord> rollouts;
  std::vector<double> action_prior;  // full action space
};

// Straightforward single-threaded MCTS (no virtual loss, no locks): expand
// the root, then for each playout descend by UCT argmax (first-index ties),
// evaluate or short-circuit terminals, expand, back up with per-level sign
// alternation.
RefTrace reference_search(const pmcts::State& root, int playouts, double c,
                          const pmcts::Evaluator& evaluator);

// Central finite differences of pmcts::loss over every parameter.
pmcts::NetParams finite_difference_grad(
    const pmcts::NetParams& params,
    std::span<const pmcts::TrainingSample> batch);

// Unimodal array: strictly decreasing limb, flat bottom (>= 1 element),
// strictly increasing limb.
std::vector<double> random_v_sequence(std::mt19937_64& rng, int length);

// Plays `moves` uniformly random legal moves from an empty board; returns a
// non-terminal position (backs off when the game ends early).
pmcts::GomokuState random_position(int board_size, int win_length, int moves,
                                   std::mt19937_64& rng);

}  // namespace oracles
