#pragma once

#include <vector>

#include "beltree/hypergraph.hpp"
#include "beltree/markov_tree.hpp"
#include "beltree/valuation.hpp"

namespace beltree {

// Directed acyclic structure over the model variables.
struct DagStructure {
  Model model;
  std::vector<std::vector<int>> parents;  // sorted parent indices per variable

  int size() const { return static_cast<int>(parents.size()); }
  Scope family(int i) const;
  bool has_edge(int from, int to) const;
  bool is_acyclic() const;
  // Topological order; throws DataError on a cycle.
  std::vector<int> topo_order() const;

  bool operator==(const DagStructure& o) const {
    return model == o.model && parents == o.parents;
  }
};

// Dag plus one valuation per node on its family scope, intended as the
// node's conditional given its parents; the represented distribution is the
// combination of all node valuations.
struct BeliefNetwork {
  DagStructure dag;
  std::vector<BeliefValuation> node_valuations;
};

// Family sets {X_i} union parents(i), reduced.
Hypergraph induced_hypergraph(const DagStructure& dag);

// True iff the reduced induced hypergraph equals reduce(h).
bool is_compatible(const DagStructure& dag, const Hypergraph& h);

// Exhaustive search for all dag structures compatible with h. Parent-set
// candidates are limited to subsets of hyperedges containing the node, which
// is complete: any compatible family must sit inside some reduced hyperedge.
std::vector<DagStructure> enumerate_compatible(const Hypergraph& h,
                                               int max_vars = 6);

// Classical d-separation via the moralized ancestral graph.
bool d_separated(const DagStructure& dag, const std::vector<int>& j_set,
                 const std::vector<int>& k_set, const std::vector<int>& l_set);

// Conditional-independence test on a distribution: the combination of the
// conditionals of (J|L) and (K|L) with the marginal on L must reproduce the
// combination form of the marginal on J,K,L, mass-wise within tol.
bool ci_holds(const BeliefValuation& bel, const std::vector<int>& j_set,
              const std::vector<int>& k_set, const std::vector<int>& l_set,
              double tol = kMassTol);

// Converts a valuated hypertree into a belief network: dag built per
// construction step (complete dag inside each edge's fresh variables, then
// separator variables point at all of them), valuations obtained by peeling
// the factorization from the last hyperedge backwards, splitting per-edge
// conditionals along the in-edge chain when an edge introduces several
// variables. The result combines back to the original joint and induces the
// original reduced hypertree.
BeliefNetwork hypertree_to_network(const MarkovTree& tree);

// Combination of all node valuations (the represented distribution).
BeliefValuation network_joint(const BeliefNetwork& net,
                              uint32_t config_limit = kJointConfigLimit);

}  // namespace beltree
