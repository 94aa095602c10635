#include "support/oracles.hpp"

#include <cmath>
#include <memory>

namespace oracles {

using namespace pmcts;

Outcome line_scan_outcome(const GomokuState& s) {
  const int n = s.board_size();
  const int w = s.win_length();
  int stones = 0;
  const int dr[4] = {0, 1, 1, 1};
  const int dc[4] = {1, 0, 1, -1};
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int8_t who = s.cell(r * n + c);
      if (who == GomokuState::kEmpty) continue;
      ++stones;
      for (int d = 0; d < 4; ++d) {
        int run = 0;
        int rr = r, cc = c;
        while (rr >= 0 && rr < n && cc >= 0 && cc < n &&
               s.cell(rr * n + cc) == who) {
          ++run;
          rr += dr[d];
          cc += dc[d];
        }
        if (run >= w) return Outcome::win(who);
      }
    }
  }
  if (stones == n * n) return Outcome::draw();
  return Outcome::ongoing();
}

namespace {
struct RefNode {
  std::unique_ptr<State> state;
  std::vector<int> actions;
  std::vector<double> prior;
  std::vector<double> w;
  std::vector<long> n;
  std::vector<std::unique_ptr<RefNode>> kids;
  bool expanded = false;

  explicit RefNode(std::unique_ptr<State> s) : state(std::move(s)) {}
};

void ref_expand(RefNode& node, const EvalResult& res) {
  if (node.expanded) return;
  node.actions = node.state->legal_actions();
  std::vector<double> gathered(node.actions.size());
  double sum = 0.0;
  for (size_t i = 0; i < node.actions.size(); ++i) {
    gathered[i] = res.priors[node.actions[i]];
    sum += gathered[i];
  }
  node.prior.resize(node.actions.size());
  for (size_t i = 0; i < node.actions.size(); ++i) {
    node.prior[i] = sum > 0.0 ? gathered[i] / sum
                              : 1.0 / node.actions.size();
  }
  node.w.assign(node.actions.size(), 0.0);
  node.n.assign(node.actions.size(), 0);
  node.kids.resize(node.actions.size());
  node.expanded = true;
}

double ref_terminal_value(const State& s) {
  const Outcome o = s.outcome();
  if (o.kind == Outcome::Kind::draw) return 0.0;
  return o.winner == s.to_move() ? 1.0 : -1.0;
}
}  // namespace

RefTrace reference_search(const State& root_state, int playouts, double c,
                          const Evaluator& evaluator) {
  RefNode root(root_state.clone());
  ref_expand(root, evaluator.evaluate(EvalRequest::from_state(root_state)));

  RefTrace out;
  for (int p = 0; p < playouts; ++p) {
    RefNode* node = &root;
    std::vector<RefNode*> nodes{&root};
    std::vector<size_t> picks;
    std::vector<int> path;
    while (node->expanded && !node->state->terminal()) {
      double sum = 0.0;
      for (long v : node->n) sum += static_cast<double>(v);
      size_t best = 0;
      double best_u = -std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < node->actions.size(); ++i) {
        const double q =
            node->n[i] > 0 ? node->w[i] / static_cast<double>(node->n[i])
                           : 0.0;
        const double u = q + c * node->prior[i] * std::sqrt(sum) /
                                 (1.0 + static_cast<double>(node->n[i]));
        if (u > best_u) {
          best_u = u;
          best = i;
        }
      }
      if (!node->kids[best]) {
        node->kids[best] = std::make_unique<RefNode>(
            node->state->apply(node->actions[best]));
      }
      path.push_back(node->actions[best]);
      picks.push_back(best);
      node = node->kids[best].get();
      nodes.push_back(node);
    }

    double value;
    if (node->state->terminal()) {
      value = ref_terminal_value(*node->state);
    } else {
      value = 0.0;
      const EvalResult res =
          evaluator.evaluate(EvalRequest::from_state(*node->state));
      value = res.value;
      ref_expand(*node, res);
    }
    out.rollouts.push_back({path, value});

    const int leaf_mover = node->state->to_move();
    for (size_t level = 0; level < picks.size(); ++level) {
      RefNode* parent = nodes[level];
      const size_t pick = picks[level];
      const double contrib =
          parent->state->to_move() == leaf_mover ? value : -value;
      parent->n[pick] += 1;
      parent->w[pick] += contrib;
    }
  }

  out.action_prior.assign(static_cast<size_t>(root_state.action_count()), 0.0);
  long total = 0;
  for (long v : root.n) total += v;
  if (total > 0) {
    for (size_t i = 0; i < root.actions.size(); ++i) {
      out.action_prior[root.actions[i]] =
          static_cast<double>(root.n[i]) / static_cast<double>(total);
    }
  }
  return out;
}

NetParams finite_difference_grad(const NetParams& params,
                                 std::span<const TrainingSample> batch) {
  NetParams g = NetParams::zeros(params.arch);
  NetParams probe = params;

  // walk parallel flat views
  std::vector<double*> probe_slots;
  probe.for_each([&](double& v) { probe_slots.push_back(&v); });
  std::vector<double*> grad_slots;
  g.for_each([&](double& v) { grad_slots.push_back(&v); });

  for (size_t i = 0; i < probe_slots.size(); ++i) {
    const double orig = *probe_slots[i];
    const double h = 1e-6 * (1.0 + std::abs(orig));
    *probe_slots[i] = orig + h;
    const double up = loss(probe, batch);
    *probe_slots[i] = orig - h;
    const double down = loss(probe, batch);
    *probe_slots[i] = orig;
    *grad_slots[i] = (up - down) / (2.0 * h);
  }
  return g;
}

std::vector<double> random_v_sequence(std::mt19937_64& rng, int length) {
  std::uniform_real_distribution<double> step(0.1, 3.0);
  std::uniform_int_distribution<int> pick_bottom_start(0, length - 1);
  const int bottom_start = pick_bottom_start(rng);
  std::uniform_int_distribution<int> pick_bottom_end(bottom_start, length - 1);
  const int bottom_end = pick_bottom_end(rng);

  std::vector<double> v(static_cast<size_t>(length));
  std::uniform_real_distribution<double> base(-10.0, 10.0);
  const double bottom = base(rng);
  for (int i = bottom_start; i <= bottom_end; ++i) v[i] = bottom;
  for (int i = bottom_start - 1; i >= 0; --i) v[i] = v[i + 1] + step(rng);
  for (int i = bottom_end + 1; i < length; ++i) v[i] = v[i - 1] + step(rng);
  return v;
}

GomokuState random_position(int board_size, int win_length, int moves,
                            std::mt19937_64& rng) {
  for (;;) {
    GomokuState state(board_size, win_length);
    std::unique_ptr<State> cur = state.clone();
    bool ok = true;
    for (int m = 0; m < moves; ++m) {
      const auto legal = cur->legal_actions();
      if (legal.empty()) {
        ok = false;
        break;
      }
      std::uniform_int_distribution<size_t> pick(0, legal.size() - 1);
      cur = cur->apply(legal[pick(rng)]);
      if (cur->terminal()) {
        ok = false;
        break;
      }
    }
    if (ok) {
      return *static_cast<const GomokuState*>(cur.get());
    }
  }
}

}  // namespace oracles
