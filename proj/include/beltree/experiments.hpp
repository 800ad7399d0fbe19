#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beltree/generator.hpp"

namespace beltree::experiments {

struct SuiteResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  std::vector<std::string> notes;

  bool pass() const { return failures == 0 && trials > 0; }
};

// Randomized algebra checks: commutativity and associativity of combination,
// marginalization consonance, the local-computation identity, the pointwise
// commonality product law, and the decombination round-trip where its
// preconditions hold.
SuiteResult axiom_suite(uint64_t seed, int trials);

// Divergence properties: identity at equal arguments, nonnegativity, and the
// +infinity rule exactly when a reference focal element has non-positive
// approximate commonality.
SuiteResult delta_properties(uint64_t seed, int trials);

// Node marginals from message passing against whole-joint marginalization,
// without evidence and with one hard-evidence potential.
SuiteResult propagation_equivalence(uint64_t seed, int trials, int max_vars);

// Hypertree-to-network conversion: the converted network must reproduce the
// joint mass-wise and induce the original reduced hypertree.
SuiteResult conversion_roundtrip(uint64_t seed, int trials);

// Strict dependence-measure inequality along every length-2 tree path of
// generated positive-commonality tree distributions.
SuiteResult path_inequality(uint64_t seed, int trials);

// The two reference hypergraphs: the five-variable one admits exactly four
// compatible dag structures, the six-variable one none.
struct ExamplesResult {
  int first_count = 0;
  int second_count = 0;
  bool structures_match = false;
  bool pass() const {
    return first_count == 4 && structures_match && second_count == 0;
  }
};
ExamplesResult reference_examples();

struct RecoveryReport {
  int trials = 0;
  int exact = 0;
  std::vector<int> hamming;        // per-trial edge-set Hamming distance
  std::vector<double> joint_delta; // divergence of learned joint, report only
  std::vector<double> joint_tv;

  double rate() const { return trials ? double(exact) / trials : 0.0; }
};

// Structure recovery from exact tree distributions (variable counts cycling
// var_lo..var_hi).
RecoveryReport exact_recovery(uint64_t seed, int trials, int var_lo,
                              int var_hi, double q_min);

// Structure recovery from set-valued samples of generated tree distributions.
RecoveryReport sampled_recovery(uint64_t seed, int trials, int var_count,
                                int n_samples);

// Bayesian specialization: identical trees under both dependence measures on
// tie-free weight rankings, and conditionals matching probability division.
SuiteResult bayesian_reduction(uint64_t seed, int trials);

// Graphical separation implies distributional conditional independence on
// generated networks, scanned over singleton triples.
SuiteResult dsep_implies_ci(uint64_t seed, int networks);

}  // namespace beltree::experiments
