#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "beltree/dataset.hpp"
#include "beltree/markov_tree.hpp"
#include "beltree/network.hpp"

namespace beltree {

struct GeneratorConfig {
  int var_count = 5;          // at most 10
  int domain_size = 2;
  int focal_per_factor = 3;   // random focal elements besides the full frame
  double q_min = 0.05;        // floor for joint commonalities at focal elements
  double dependence_floor = 0.02;  // per-edge divergence from independence
  bool bayesian = false;
  uint64_t seed = 1;
  int max_retries = 60;
};

struct GeneratedTree {
  Model model;
  std::vector<std::pair<int, int>> edges;  // (child, parent); root = 0
  ConstructionSequence sequence;           // the pairwise hypertree
  std::vector<BeliefValuation> factors;    // per hyperedge; combine to joint
  BeliefValuation joint;
  BeliefNetwork network;                   // oriented tree with conditionals

  bool has_edge(int a, int b) const;
};

// Random spanning tree over the variables with one proper valuation per edge.
// Factors keep enough vacuous mass that every commonality of the joint stays
// at or above q_min, so divergences remain finite; each edge factor is
// resampled until it departs from independence by at least dependence_floor.
// In Bayesian mode the factors are conditional-probability links whose
// combination is a proper Bayesian joint.
GeneratedTree generate_tree_distribution(const GeneratorConfig& cfg);

// Draws n focal sets i.i.d. with probability equal to their mass. Requires a
// proper valuation; deterministic given the seed.
SampleDataset sample(const BeliefValuation& joint, int n, uint64_t seed);

struct HypertreeConfig {
  int var_count = 6;
  int min_edge_size = 2;
  int max_edge_size = 3;
  int domain_size = 2;
  int focal_per_factor = 3;
  double q_min = 0.05;
  uint64_t seed = 1;
};

// Random hypertree built twig by twig, with a proper positive-commonality
// factor on every hyperedge.
MarkovTree generate_random_hypertree(const HypertreeConfig& cfg);

// Random dag over n variables with random conditional-probability tables;
// returns the network and its (proper Bayesian) joint.
struct GeneratedBayesNet {
  BeliefNetwork network;
  BeliefValuation joint;
};
GeneratedBayesNet generate_random_bayes_net(int var_count, double edge_prob,
                                            uint64_t seed);

class Rng;

// Proper valuation with `extra` random focal elements plus the full frame,
// which keeps at least vacuity_floor mass (so every commonality does too).
// With surjective = true every focal element projects onto the full domain of
// each scope variable; tree combinations of such factors carry no conflict.
BeliefValuation random_proper_valuation(const Scope& scope, int extra,
                                        double vacuity_floor, Rng& rng,
                                        bool surjective = false);

}  // namespace beltree
