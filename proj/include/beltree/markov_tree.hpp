#pragma once

#include <vector>

#include "beltree/hypergraph.hpp"
#include "beltree/valuation.hpp"

namespace beltree {

// Default cap on the joint frame for whole-joint computations: ten
// binary-equivalent variables.
inline constexpr uint32_t kJointConfigLimit = 1024;

// Propagation graph: one node per hyperedge of a construction sequence, a
// factor attached to each node (extended to the node's hyperedge), and tree
// links (k, branch[k]) with separator scopes.
struct MarkovTree {
  ConstructionSequence seq;
  std::vector<BeliefValuation> factors;

  int node_count() const { return seq.size(); }
};

// Checks factor scopes against hyperedges and extends each factor to its
// node's hyperedge. The implicit joint is the combination of all factors.
MarkovTree build_markov_tree(const ConstructionSequence& seq,
                             std::vector<BeliefValuation> factors);

// Two-phase (collect then distribute) message passing. Evidence is combined
// into the lowest-index node whose hyperedge contains its scope. Returns one
// valuation per node, equal to the marginal of the combined joint (with
// evidence) on that node's hyperedge; results stay unnormalized.
std::vector<BeliefValuation> propagate(
    const MarkovTree& tree,
    const std::vector<EvidencePotential>& evidence = {}, int root = 0);

// Testing oracle: the full combination on the union scope, the very thing
// propagation exists to avoid.
BeliefValuation brute_force_joint(const std::vector<BeliefValuation>& factors,
                                  uint32_t config_limit = kJointConfigLimit);

}  // namespace beltree
