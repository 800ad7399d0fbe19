#include "beltree/markov_tree.hpp"

#include <algorithm>
#include <map>

namespace beltree {

MarkovTree build_markov_tree(const ConstructionSequence& seq,
                             std::vector<BeliefValuation> factors) {
  if (!validate_construction_sequence(seq))
    throw DataError("build_markov_tree: invalid construction sequence");
  if (static_cast<int>(factors.size()) != seq.size())
    throw DataError("build_markov_tree: one factor per hyperedge required");
  for (int k = 0; k < seq.size(); ++k) {
    if (!seq.edges[k].contains(factors[k].scope()))
      throw ScopeError("build_markov_tree: factor scope exceeds hyperedge " +
                       std::to_string(k));
    factors[k] = vacuous_extend(factors[k], seq.edges[k]);
  }
  return MarkovTree{seq, std::move(factors)};
}

std::vector<BeliefValuation> propagate(
    const MarkovTree& tree, const std::vector<EvidencePotential>& evidence,
    int root) {
  const int n = tree.node_count();
  if (root < 0 || root >= n) throw DataError("propagate: bad root index");

  std::vector<BeliefValuation> work = tree.factors;
  for (const auto& e : evidence) {
    int placed = -1;
    for (int k = 0; k < n; ++k) {
      if (tree.seq.edges[k].contains(e.scope())) {
        placed = k;
        break;
      }
    }
    if (placed < 0)
      throw DataError("propagate: no hyperedge covers the evidence scope");
    work[placed] = combine(work[placed], e.valuation());
  }
  if (n == 1) return work;

  std::vector<std::vector<int>> adj(n);
  for (int k = 1; k < n; ++k) {
    adj[k].push_back(tree.seq.branch[k]);
    adj[tree.seq.branch[k]].push_back(k);
  }

  // BFS order from the chosen root; collect runs in reverse, distribute
  // forward. Any root yields the same node marginals.
  std::vector<int> order, parent(n, -1);
  order.reserve(n);
  order.push_back(root);
  for (size_t i = 0; i < order.size(); ++i) {
    int u = order[i];
    for (int v : adj[u]) {
      if (v != parent[u]) {
        parent[v] = u;
        order.push_back(v);
      }
    }
  }

  std::map<std::pair<int, int>, BeliefValuation> message;
  auto send = [&](int from, int to) {
    BeliefValuation acc = work[from];
    for (int v : adj[from]) {
      if (v == to) continue;
      acc = combine(acc, message.at({v, from}));
    }
    Scope sep = tree.seq.edges[from].set_intersect(tree.seq.edges[to]);
    message.emplace(std::make_pair(from, to), marginalize(acc, sep));
  };

  for (size_t i = order.size(); i-- > 1;) send(order[i], parent[order[i]]);
  for (size_t i = 1; i < order.size(); ++i) send(parent[order[i]], order[i]);

  std::vector<BeliefValuation> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    BeliefValuation acc = work[k];
    for (int v : adj[k]) acc = combine(acc, message.at({v, k}));
    out.push_back(vacuous_extend(acc, tree.seq.edges[k]));
  }
  return out;
}

BeliefValuation brute_force_joint(const std::vector<BeliefValuation>& factors,
                                  uint32_t config_limit) {
  if (factors.empty()) throw DataError("brute_force_joint: no factors");
  Scope u = factors.front().scope();
  for (const auto& f : factors) u = u.set_union(f.scope());
  if (u.config_count() > config_limit)
    throw DataError("brute_force_joint: joint frame of " +
                    std::to_string(u.config_count()) +
                    " configurations exceeds the limit of " +
                    std::to_string(config_limit));
  BeliefValuation joint = vacuous_extend(factors.front(), u);
  for (size_t i = 1; i < factors.size(); ++i)
    joint = combine(joint, factors[i]);
  return joint;
}

}  // namespace beltree
