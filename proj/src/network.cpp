#include "beltree/network.hpp"

#include <algorithm>
#include <set>

namespace beltree {

Scope DagStructure::family(int i) const {
  std::vector<int> vars = parents[i];
  vars.push_back(i);
  return Scope(model, std::move(vars));
}

bool DagStructure::has_edge(int from, int to) const {
  return std::binary_search(parents[to].begin(), parents[to].end(), from);
}

std::vector<int> DagStructure::topo_order() const {
  const int n = size();
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> children(n);
  for (int v = 0; v < n; ++v) {
    indeg[v] = static_cast<int>(parents[v].size());
    for (int p : parents[v]) children[p].push_back(v);
  }
  std::vector<int> order;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (size_t i = 0; i < order.size(); ++i) {
    for (int c : children[order[i]]) {
      if (--indeg[c] == 0) order.push_back(c);
    }
  }
  if (static_cast<int>(order.size()) != n)
    throw DataError("graph contains a directed cycle");
  return order;
}

bool DagStructure::is_acyclic() const {
  try {
    topo_order();
    return true;
  } catch (const DataError&) {
    return false;
  }
}

Hypergraph induced_hypergraph(const DagStructure& dag) {
  std::vector<Scope> families;
  families.reserve(dag.size());
  for (int i = 0; i < dag.size(); ++i) families.push_back(dag.family(i));
  return reduce(Hypergraph(Scope::full(dag.model), std::move(families)));
}

bool is_compatible(const DagStructure& dag, const Hypergraph& h) {
  if (!(dag.model == h.vertices().model()))
    throw DataError("is_compatible: different variable universes");
  return induced_hypergraph(dag).edges() == reduce(h).edges();
}

std::vector<DagStructure> enumerate_compatible(const Hypergraph& h,
                                               int max_vars) {
  const Model& model = h.vertices().model();
  if (model.size() > max_vars)
    throw DataError("enumerate_compatible: variable count exceeds limit");
  Hypergraph target = reduce(h);

  // Candidate parent sets per node: subsets of (e - {v}) over edges e
  // containing v, plus the empty set.
  const int n = model.size();
  std::vector<std::vector<std::vector<int>>> candidates(n);
  for (int v = 0; v < n; ++v) {
    std::set<std::vector<int>> sets;
    sets.insert(std::vector<int>{});
    for (const auto& e : target.edges()) {
      if (!e.contains_var(v)) continue;
      std::vector<int> rest;
      for (int u : e.vars())
        if (u != v) rest.push_back(u);
      const int m = static_cast<int>(rest.size());
      for (int mask = 1; mask < (1 << m); ++mask) {
        std::vector<int> p;
        for (int i = 0; i < m; ++i)
          if (mask & (1 << i)) p.push_back(rest[i]);
        sets.insert(std::move(p));
      }
    }
    candidates[v].assign(sets.begin(), sets.end());
  }

  std::vector<DagStructure> found;
  DagStructure dag{model, std::vector<std::vector<int>>(n)};
  auto search = [&](auto&& self, int v) -> void {
    if (v == n) {
      if (dag.is_acyclic() && is_compatible(dag, target))
        found.push_back(dag);
      return;
    }
    for (const auto& p : candidates[v]) {
      dag.parents[v] = p;
      self(self, v + 1);
    }
    dag.parents[v].clear();
  };
  search(search, 0);
  return found;
}

bool d_separated(const DagStructure& dag, const std::vector<int>& j_set,
                 const std::vector<int>& k_set, const std::vector<int>& l_set) {
  const int n = dag.size();
  std::set<int> j(j_set.begin(), j_set.end());
  std::set<int> k(k_set.begin(), k_set.end());
  std::set<int> l(l_set.begin(), l_set.end());

  // Ancestral closure of J, K, L.
  std::vector<bool> relevant(n, false);
  std::vector<int> stack;
  for (int v : j_set) stack.push_back(v);
  for (int v : k_set) stack.push_back(v);
  for (int v : l_set) stack.push_back(v);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (relevant[v]) continue;
    relevant[v] = true;
    for (int p : dag.parents[v]) stack.push_back(p);
  }

  // Moralize within the ancestral graph.
  std::vector<std::set<int>> adj(n);
  for (int v = 0; v < n; ++v) {
    if (!relevant[v]) continue;
    for (int p : dag.parents[v]) {
      adj[v].insert(p);
      adj[p].insert(v);
    }
    for (size_t a = 0; a < dag.parents[v].size(); ++a) {
      for (size_t b = a + 1; b < dag.parents[v].size(); ++b) {
        adj[dag.parents[v][a]].insert(dag.parents[v][b]);
        adj[dag.parents[v][b]].insert(dag.parents[v][a]);
      }
    }
  }

  // Reachability from J to K avoiding L.
  std::vector<bool> seen(n, false);
  for (int v : j_set) {
    if (!l.count(v)) {
      seen[v] = true;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (k.count(v)) return false;
    for (int u : adj[v]) {
      if (!seen[u] && !l.count(u) && relevant[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
    }
  }
  return true;
}

bool ci_holds(const BeliefValuation& bel, const std::vector<int>& j_set,
              const std::vector<int>& k_set, const std::vector<int>& l_set,
              double tol) {
  const Model& model = bel.scope().model();
  Scope sj(model, j_set), sk(model, k_set), sl(model, l_set);
  if (!sj.set_intersect(sk).is_empty() || !sj.set_intersect(sl).is_empty() ||
      !sk.set_intersect(sl).is_empty())
    throw DataError("ci_holds: J, K, L must be pairwise disjoint");
  Scope jkl = sj.set_union(sk).set_union(sl);
  if (!bel.scope().contains(jkl))
    throw ScopeError("ci_holds: variables outside the distribution scope");

  if (sl.is_empty()) {
    BeliefValuation lhs = marginalize(bel, sj.set_union(sk));
    BeliefValuation rhs = combine(marginalize(bel, sj), marginalize(bel, sk));
    return mass_distance(lhs, rhs) <= tol;
  }
  BeliefValuation margl = marginalize(bel, sl);
  BeliefValuation lhs = combine(conditional(bel, jkl, sl), margl);
  BeliefValuation rhs = combine(
      combine(conditional(bel, sj.set_union(sl), sl),
              conditional(bel, sk.set_union(sl), sl)),
      margl);
  return mass_distance(lhs, rhs) <= tol;
}

BeliefNetwork hypertree_to_network(const MarkovTree& tree) {
  const ConstructionSequence& seq = tree.seq;
  const Model& model = seq.edges.front().model();
  const int n = seq.size();

  // Fresh variables per step: edge k minus its branch (all of edge 0). The
  // twig property makes these groups a partition of the covered variables.
  std::vector<std::vector<int>> group(n);
  std::vector<int> owner(model.size(), -1);
  for (int k = 0; k < n; ++k) {
    Scope fresh = k == 0 ? seq.edges[0]
                         : seq.edges[k].set_difference(seq.edges[seq.branch[k]]);
    group[k] = fresh.vars();
    for (int v : group[k]) {
      if (owner[v] != -1)
        throw DataError("hypertree_to_network: variable introduced twice");
      owner[v] = k;
    }
  }
  for (int v = 0; v < model.size(); ++v) {
    if (owner[v] < 0)
      throw DataError("hypertree_to_network: variable " + model.var(v).name +
                      " is not covered by the hypertree");
  }

  // Structure: complete dag over each group in model order; separator
  // variables point at every group variable.
  DagStructure dag{model, std::vector<std::vector<int>>(model.size())};
  for (int k = 0; k < n; ++k) {
    Scope sep = k == 0 ? Scope::empty(model) : seq.separator(k);
    for (size_t j = 0; j < group[k].size(); ++j) {
      std::vector<int> par = sep.vars();
      par.insert(par.end(), group[k].begin(), group[k].begin() + j);
      std::sort(par.begin(), par.end());
      dag.parents[group[k][j]] = std::move(par);
    }
  }

  // Valuation peeling, last hyperedge first.
  std::vector<BeliefValuation> factors = tree.factors;
  std::vector<std::optional<BeliefValuation>> node_val(model.size());
  for (int m = n - 1; m >= 0; --m) {
    // Local valuation on edge m: its factor combined with every remaining
    // factor's marginal on the shared variables.
    BeliefValuation local = factors[m];
    std::vector<std::optional<BeliefValuation>> margs(m);
    for (int k = 0; k < m; ++k) {
      Scope shared = seq.edges[k].set_intersect(seq.edges[m]);
      if (shared.is_empty()) continue;
      margs[k] = marginalize(factors[k], shared);
      local = combine(local, *margs[k]);
    }
    local = vacuous_extend(local, seq.edges[m]);

    Scope sep = m == 0 ? Scope::empty(model) : seq.separator(m);
    // Chain-split the conditional of `local` given the separator over the
    // group variables; each link lands on one network node.
    std::vector<int> chain = sep.vars();
    for (size_t j = 0; j < group[m].size(); ++j) {
      Scope par(model, chain);
      chain.push_back(group[m][j]);
      Scope fam(model, chain);
      try {
        node_val[group[m][j]] = conditional(local, fam, par);
      } catch (const DecombinationError& e) {
        throw DecombinationError(
            std::string(e.what()) + " (while splitting the conditional of "
            "hyperedge " + std::to_string(m) + " at variable " +
            model.var(group[m][j]).name + ")");
      }
    }
    if (m == 0) break;

    // Push the separator marginal onto the branch and strip each remaining
    // factor of its own shared marginal.
    BeliefValuation sep_marg = marginalize(local, sep);
    for (int k = 0; k < m; ++k) {
      if (!margs[k]) continue;
      try {
        factors[k] = decombine(factors[k], *margs[k]);
      } catch (const DecombinationError& e) {
        throw DecombinationError(std::string(e.what()) +
                                 " (while peeling hyperedge " +
                                 std::to_string(m) + " out of factor " +
                                 std::to_string(k) + ")");
      }
    }
    factors[seq.branch[m]] = combine(factors[seq.branch[m]], sep_marg);
  }

  BeliefNetwork net{std::move(dag), {}};
  net.node_valuations.reserve(model.size());
  for (int v = 0; v < model.size(); ++v)
    net.node_valuations.push_back(std::move(*node_val[v]));
  return net;
}

BeliefValuation network_joint(const BeliefNetwork& net, uint32_t config_limit) {
  // Fold in topological order: each conditional then telescopes against the
  // marginal already accumulated, which keeps intermediate focal counts at
  // the size of genuine sub-joints instead of letting them multiply.
  std::vector<int> order = net.dag.topo_order();
  std::vector<BeliefValuation> ordered;
  ordered.reserve(order.size());
  for (int v : order) ordered.push_back(net.node_valuations[v]);
  return brute_force_joint(ordered, config_limit);
}

}  // namespace beltree
