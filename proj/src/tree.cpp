#include "pmcts/tree.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace pmcts {

namespace {
thread_local int g_held_node_locks = 0;

// Node-lock guard that maintains the per-thread held-lock counter.
class NodeLock {
 public:
  NodeLock(TreeNode& node, bool engage) : node_(node), engaged_(engage) {
    if (engaged_) {
      node_.lock().lock();
      ++g_held_node_locks;
    }
  }
  ~NodeLock() {
    if (engaged_) {
      --g_held_node_locks;
      node_.lock().unlock();
    }
  }
  NodeLock(const NodeLock&) = delete;
  NodeLock& operator=(const NodeLock&) = delete;

 private:
  TreeNode& node_;
  bool engaged_;
};
}  // namespace

int held_node_locks() { return g_held_node_locks; }

TreeNode::TreeNode(std::unique_ptr<const State> state, TreeNode* parent,
                   int parent_edge)
    : state_(std::move(state)),
      outcome_(state_->outcome()),
      parent_(parent),
      parent_edge_(parent_edge) {}

SearchTree::SearchTree(const State& root_state) {
  arena_.emplace_back(root_state.clone(), nullptr, -1);
  root_ = &arena_.back();
}

TreeNode* SearchTree::alloc(std::unique_ptr<const State> state,
                            TreeNode* parent, int parent_edge) {
  std::lock_guard<std::mutex> g(arena_mu_);
  arena_.emplace_back(std::move(state), parent, parent_edge);
  return &arena_.back();
}

size_t SearchTree::node_count() const {
  std::lock_guard<std::mutex> g(arena_mu_);
  return arena_.size();
}

std::string SearchTree::dump() const {
  std::lock_guard<std::mutex> g(arena_mu_);
  std::unordered_map<const TreeNode*, size_t> ids;
  ids.reserve(arena_.size());
  size_t i = 0;
  for (const auto& n : arena_) ids[&n] = i++;
  std::ostringstream os;
  i = 0;
  for (const auto& n : arena_) {
    os << "node " << i << " parent "
       << (n.parent() ? static_cast<long>(ids.at(n.parent())) : -1)
       << " action " << n.parent_edge() << " expanded " << n.expanded()
       << " terminal " << n.terminal() << "\n";
    for (size_t e = 0; e < n.edges.size(); ++e) {
      const auto& ed = n.edges[e];
      os << "  edge " << e << " action " << ed.action << " n " << ed.n << " q "
         << ed.q << " p " << ed.p << " vl " << ed.vl_pending << "\n";
    }
    ++i;
  }
  return os.str();
}

double uct_score(const EdgeStats& e, double sibling_visit_sum,
                 const UctParams& params) {
  return e.q_eff(params.virtual_loss) +
         params.c * e.p * std::sqrt(sibling_visit_sum) / (1.0 + e.n_eff());
}

SelectResult select_path(SearchTree& tree, const UctParams& params,
                         bool locked, const WorkloadEmu& emu) {
  TreeNode* node = &tree.root();
  int depth = 0;
  while (node->expanded() && !node->terminal()) {
    TreeNode* next = nullptr;
    {
      NodeLock g(*node, locked);
      if (locked && node->parent() == nullptr &&
          emu.shared_root_access > Duration::zero()) {
        precise_delay(emu.shared_root_access);
      }
      double sum = 0.0;
      for (const auto& e : node->edges) sum += e.n_eff();
      size_t best = 0;
      double best_u = -std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < node->edges.size(); ++i) {
        const double u = uct_score(node->edges[i], sum, params);
        if (u > best_u) {
          best_u = u;
          best = i;
        }
      }
      EdgeStats& edge = node->edges[best];
      edge.vl_pending += 1;
      if (node->children[best] == nullptr) {
        node->children[best] =
            tree.alloc(node->state().apply(edge.action), node,
                       static_cast<int>(best));
      }
      next = node->children[best];
    }
    node = next;
    ++depth;
  }
  if (emu.select_work_per_node > Duration::zero() && depth > 0) {
    precise_delay(emu.select_work_per_node * depth);
  }
  return {node, depth};
}

void expand(TreeNode& leaf, std::span<const double> priors_over_legal,
            bool locked) {
  NodeLock g(leaf, locked);
  if (leaf.expanded()) return;
  const auto legal = leaf.state().legal_actions();
  if (priors_over_legal.size() != legal.size()) {
    throw std::invalid_argument(
        "expand: priors length " + std::to_string(priors_over_legal.size()) +
        " != legal action count " + std::to_string(legal.size()));
  }
  double sum = 0.0;
  for (double p : priors_over_legal) sum += p;
  leaf.edges.resize(legal.size());
  leaf.children.assign(legal.size(), nullptr);
  const double uniform = legal.empty() ? 0.0 : 1.0 / legal.size();
  for (size_t i = 0; i < legal.size(); ++i) {
    leaf.edges[i].action = legal[i];
    leaf.edges[i].p = sum > 0.0 ? priors_over_legal[i] / sum : uniform;
  }
  leaf.expanded_.store(true, std::memory_order_release);
}

namespace {
// Shared walk for backup and virtual-loss revert.
void walk_to_root(TreeNode& leaf, bool locked, bool record_visit, double value,
                  const WorkloadEmu& emu) {
  const int leaf_mover = leaf.state().to_move();
  TreeNode* node = &leaf;
  int depth = 0;
  while (node->parent() != nullptr) {
    TreeNode* parent = node->parent();
    const int ei = node->parent_edge();
    {
      NodeLock g(*parent, locked);
      EdgeStats& e = parent->edges[ei];
      if (e.vl_pending <= 0) throw VirtualLossUnderflow();
      e.vl_pending -= 1;
      if (record_visit) {
        const double contrib =
            parent->state().to_move() == leaf_mover ? value : -value;
        e.n += 1;
        e.w += contrib;
        e.q = e.w / e.n;
      }
    }
    node = parent;
    ++depth;
  }
  if (record_visit && emu.backup_work_per_node > Duration::zero() &&
      depth > 0) {
    precise_delay(emu.backup_work_per_node * depth);
  }
}
}  // namespace

void backup(TreeNode& leaf, double value, bool locked,
            const WorkloadEmu& emu) {
  walk_to_root(leaf, locked, true, value, emu);
}

void revert_virtual_loss(TreeNode& leaf, bool locked) {
  walk_to_root(leaf, locked, false, 0.0, {});
}

double terminal_value(const TreeNode& leaf) {
  const Outcome o = leaf.outcome();
  switch (o.kind) {
    case Outcome::Kind::win:
      return o.winner == leaf.state().to_move() ? 1.0 : -1.0;
    case Outcome::Kind::draw:
      return 0.0;
    default:
      throw std::logic_error("terminal_value on ongoing state");
  }
}

void add_dirichlet_noise(TreeNode& root, double alpha, double eps,
                         std::mt19937_64& rng) {
  if (eps <= 0.0 || root.edges.empty()) return;
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> noise(root.edges.size());
  double sum = 0.0;
  for (auto& x : noise) {
    x = gamma(rng);
    sum += x;
  }
  if (sum <= 0.0) return;
  for (size_t i = 0; i < root.edges.size(); ++i) {
    root.edges[i].p = (1.0 - eps) * root.edges[i].p + eps * noise[i] / sum;
  }
}

}  // namespace pmcts
