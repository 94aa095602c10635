#include "pmcts/search_common.hpp"

#include <algorithm>
#include <sstream>

namespace pmcts {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::select:
      return "select";
    case Phase::eval:
      return "eval";
    case Phase::expand:
      return "expand";
    case Phase::backup:
      return "backup";
    case Phase::block:
      return "block";
  }
  return "?";
}

std::string trace_to_text(const MoveTrace& trace) {
  std::ostringstream os;
  os << "worker\trollout\tphase\tbegin_us\tend_us\tpath_len\tin_flight\tnote\n";
  for (const auto& e : trace.events) {
    os << e.worker << '\t' << e.rollout << '\t' << phase_name(e.phase) << '\t'
       << to_us(e.begin) << '\t' << to_us(e.end) << '\t' << e.path_len << '\t'
       << e.in_flight << '\t' << e.note << '\n';
  }
  return os.str();
}

std::vector<ActionId> path_actions(const TreeNode& leaf) {
  std::vector<ActionId> path;
  const TreeNode* node = &leaf;
  while (node->parent() != nullptr) {
    path.push_back(node->parent()->edges[node->parent_edge()].action);
    node = node->parent();
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<double> gather_legal_priors(const State& leaf_state,
                                        const EvalResult& result) {
  const auto legal = leaf_state.legal_actions();
  std::vector<double> out(legal.size());
  for (size_t i = 0; i < legal.size(); ++i) {
    out[i] = legal[i] < static_cast<int>(result.priors.size())
                 ? result.priors[legal[i]]
                 : 0.0;
  }
  return out;
}

std::vector<double> root_action_prior(const TreeNode& root, int action_count) {
  std::vector<double> prior(static_cast<size_t>(action_count), 0.0);
  long total = 0;
  for (const auto& e : root.edges) total += e.n;
  if (total > 0) {
    for (const auto& e : root.edges) {
      prior[e.action] = static_cast<double>(e.n) / total;
    }
  } else if (!root.edges.empty()) {
    for (const auto& e : root.edges) prior[e.action] = 1.0 / root.edges.size();
  }
  return prior;
}

}  // namespace pmcts
