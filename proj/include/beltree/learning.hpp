#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "beltree/dataset.hpp"
#include "beltree/network.hpp"
#include "beltree/valuation.hpp"

namespace beltree {

// Access to marginals of a target distribution on small scopes; either exact
// (from a materialized joint) or estimated (from set-valued samples).
class MarginalSource {
 public:
  virtual ~MarginalSource() = default;
  virtual const Model& model() const = 0;
  virtual BeliefValuation marginal(const Scope& h) const = 0;
};

class ExactMarginalSource : public MarginalSource {
 public:
  explicit ExactMarginalSource(BeliefValuation joint);
  const Model& model() const override { return joint_.scope().model(); }
  BeliefValuation marginal(const Scope& h) const override;
  const BeliefValuation& joint() const { return joint_; }

 private:
  BeliefValuation joint_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<int>, BeliefValuation> cache_;
};

class EmpiricalMarginalSource : public MarginalSource {
 public:
  // smoothing < 0 selects the default 1 / (2 * record count).
  explicit EmpiricalMarginalSource(SampleDataset data, double smoothing = -1);
  const Model& model() const override { return data_.scope.model(); }
  BeliefValuation marginal(const Scope& h) const override;
  double smoothing() const { return smoothing_; }

 private:
  SampleDataset data_;
  double smoothing_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<int>, BeliefValuation> cache_;
};

// Kullback-Leibler dependence of a Bayesian two-variable valuation:
// sum over x, y of P(x,y) * log(P(x,y) / (P(x) P(y))), natural log,
// zero-probability terms contributing zero.
double dep_kl(const BeliefValuation& pairwise);

// The two-variable distribution induced by screening x1 and x2 through the
// background variable x3: combine the conditionals of {x1,x3} and {x2,x3}
// given x3 with the marginal of x3, then marginalize onto {x1,x2}. Equals the
// true pairwise marginal whenever x1 and x2 are independent given x3.
BeliefValuation ternary_background_joint(const MarginalSource& src, int x1,
                                         int x2, int x3);
BeliefValuation ternary_background_joint(const BeliefValuation& bel, int x1,
                                         int x2, int x3);

struct DepEntry {
  double value = 0.0;
  int background = -1;  // -1: the direct-independence arm attained the min
};

// Pairwise dependence: the smaller of the direct-independence divergence and
// the best background-screened divergence, each measured as the divergence of
// the approximation from the true pairwise marginal.
DepEntry dep_bn(const MarginalSource& src, int x1, int x2);
DepEntry dep_bn(const BeliefValuation& bel, int x1, int x2);

struct DepMatrix {
  int n = 0;
  std::vector<DepEntry> cells;  // row-major, diagonal unused

  DepEntry& at(int i, int j) { return cells[i * n + j]; }
  const DepEntry& at(int i, int j) const { return cells[i * n + j]; }
};

enum class DepMeasure { dep_bn, dep_kl };

struct LearnedTree {
  std::vector<std::pair<int, int>> edges;  // undirected, first < second
  int root = 0;
  BeliefNetwork network;
  DepMatrix dep;
  std::vector<std::string> tie_log;
};

// Extended Chow/Liu recovery: fill the dependence matrix, build the
// maximum-weight spanning tree (Kruskal, ties lexicographic), orient away
// from the lowest-index variable, and valuate each node from the pairwise
// marginal's conditional given the parent.
LearnedTree learn_tree(const MarginalSource& src,
                       DepMeasure measure = DepMeasure::dep_bn);

}  // namespace beltree
