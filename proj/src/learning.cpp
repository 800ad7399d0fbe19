#include "beltree/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace beltree {

BeliefValuation estimate_marginal(const SampleDataset& data, const Scope& h,
                                  double smoothing) {
  if (data.records.empty()) throw DataError("estimate_marginal: empty dataset");
  auto table = data.scope.projection_to(h);
  BeliefValuation::MassMap counts;
  for (const auto& rec : data.records) {
    Bitmask small(h.config_count());
    rec.for_each_set([&](uint32_t idx) { small.set(table[idx]); });
    if (small.none())
      throw DataError("estimate_marginal: empty record projection");
    counts[std::move(small)] += 1.0;
  }
  const double n = static_cast<double>(data.records.size());
  for (auto& [set, c] : counts) {
    (void)set;
    c /= n;
  }
  if (smoothing > 0.0) {
    counts[Bitmask::full(h.config_count())] += smoothing;
    for (auto& [set, c] : counts) {
      (void)set;
      c /= 1.0 + smoothing;
    }
  }
  return BeliefValuation(h, std::move(counts));
}

ExactMarginalSource::ExactMarginalSource(BeliefValuation joint)
    : joint_(std::move(joint)) {}

BeliefValuation ExactMarginalSource::marginal(const Scope& h) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(h.vars());
  if (it == cache_.end())
    it = cache_.emplace(h.vars(), marginalize(joint_, h)).first;
  return it->second;
}

EmpiricalMarginalSource::EmpiricalMarginalSource(SampleDataset data,
                                                 double smoothing)
    : data_(std::move(data)),
      smoothing_(smoothing >= 0
                     ? smoothing
                     : 1.0 / (2.0 * std::max(1, data_.size()))) {}

BeliefValuation EmpiricalMarginalSource::marginal(const Scope& h) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(h.vars());
  if (it == cache_.end())
    it = cache_.emplace(h.vars(), estimate_marginal(data_, h, smoothing_)).first;
  return it->second;
}

double dep_kl(const BeliefValuation& pairwise) {
  if (pairwise.scope().size() != 2)
    throw DataError("dep_kl: a two-variable valuation is required");
  if (!pairwise.is_bayesian(1e-6))
    throw DataError("dep_kl: a Bayesian valuation is required");
  const Scope& s = pairwise.scope();
  const int dx = s.domain_size(0), dy = s.domain_size(1);
  std::vector<double> joint(s.config_count(), 0.0);
  for (const auto& [set, mass] : pairwise.masses()) {
    if (set.count() != 1) continue;  // sub-tolerance residue
    set.for_each_set([&](uint32_t idx) { joint[idx] = mass; });
  }
  std::vector<double> px(dx, 0.0), py(dy, 0.0);
  for (int x = 0; x < dx; ++x)
    for (int y = 0; y < dy; ++y) {
      px[x] += joint[x * dy + y];
      py[y] += joint[x * dy + y];
    }
  double total = 0;
  for (int x = 0; x < dx; ++x)
    for (int y = 0; y < dy; ++y) {
      double p = joint[x * dy + y];
      if (p > 0.0) total += p * std::log(p / (px[x] * py[y]));
    }
  return total;
}

BeliefValuation ternary_background_joint(const MarginalSource& src, int x1,
                                         int x2, int x3) {
  const Model& m = src.model();
  if (x1 == x2 || x1 == x3 || x2 == x3)
    throw DataError("ternary_background_joint: variables must be distinct");
  Scope s1(m, {x1}), s2(m, {x2}), s3(m, {x3});
  Scope p13(m, {x1, x3}), p23(m, {x2, x3});

  BeliefValuation c13 = mk_condition(src.marginal(p13), s3);
  BeliefValuation c23 = mk_condition(src.marginal(p23), s3);
  BeliefValuation screened = combine(combine(c13, c23), src.marginal(s3));
  return marginalize(screened, s1.set_union(s2));
}

BeliefValuation ternary_background_joint(const BeliefValuation& bel, int x1,
                                         int x2, int x3) {
  return ternary_background_joint(ExactMarginalSource(bel), x1, x2, x3);
}

DepEntry dep_bn(const MarginalSource& src, int x1, int x2) {
  const Model& m = src.model();
  Scope pair(m, {x1, x2});
  BeliefValuation truth = src.marginal(pair);

  DepEntry best;
  best.value = delta_divergence(
      combine(src.marginal(Scope(m, {x1})), src.marginal(Scope(m, {x2}))),
      truth);
  best.background = -1;
  for (int x3 = 0; x3 < m.size(); ++x3) {
    if (x3 == x1 || x3 == x2) continue;
    double d =
        delta_divergence(ternary_background_joint(src, x1, x2, x3), truth);
    if (d < best.value) {
      best.value = d;
      best.background = x3;
    }
  }
  return best;
}

DepEntry dep_bn(const BeliefValuation& bel, int x1, int x2) {
  return dep_bn(ExactMarginalSource(bel), x1, x2);
}

LearnedTree learn_tree(const MarginalSource& src, DepMeasure measure) {
  const Model& m = src.model();
  const int n = m.size();
  if (n < 2) throw DataError("learn_tree: at least two variables required");

  LearnedTree result;
  result.dep.n = n;
  result.dep.cells.assign(static_cast<size_t>(n) * n, DepEntry{});

  struct Cand {
    double w;
    int i, j;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      DepEntry e;
      if (measure == DepMeasure::dep_bn) {
        e = dep_bn(src, i, j);
      } else {
        e.value = dep_kl(src.marginal(Scope(m, {i, j})));
        e.background = -1;
      }
      if (std::isnan(e.value))
        throw NumericError("learn_tree: dependence weight is NaN for pair " +
                           m.var(i).name + "," + m.var(j).name);
      result.dep.at(i, j) = e;
      result.dep.at(j, i) = e;
      cands.push_back({e.value, i, j});
    }
  }

  // Maximum-weight spanning tree; +infinity sorts first, exact weight ties
  // fall back to lexicographic edge order and get logged.
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.w != b.w) return a.w > b.w;
    return std::make_pair(a.i, a.j) < std::make_pair(b.i, b.j);
  });
  for (size_t i = 0; i + 1 < cands.size(); ++i) {
    if (cands[i].w == cands[i + 1].w) {
      std::ostringstream os;
      os << "tie at weight " << cands[i].w << " between " << m.var(cands[i].i).name
         << "-" << m.var(cands[i].j).name << " and " << m.var(cands[i + 1].i).name
         << "-" << m.var(cands[i + 1].j).name;
      result.tie_log.push_back(os.str());
    }
  }

  std::vector<int> uf(n);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int v) {
    while (uf[v] != v) v = uf[v] = uf[uf[v]];
    return v;
  };
  for (const auto& c : cands) {
    int a = find(c.i), b = find(c.j);
    if (a == b) continue;
    uf[a] = b;
    result.edges.emplace_back(c.i, c.j);
    if (static_cast<int>(result.edges.size()) == n - 1) break;
  }
  std::sort(result.edges.begin(), result.edges.end());

  // Orient away from the lowest-index variable.
  result.root = 0;
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : result.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> parent(n, -1), order{0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  for (size_t i = 0; i < order.size(); ++i) {
    for (int v : adj[order[i]]) {
      if (!seen[v]) {
        seen[v] = true;
        parent[v] = order[i];
        order.push_back(v);
      }
    }
  }

  DagStructure dag{m, std::vector<std::vector<int>>(n)};
  for (int v = 0; v < n; ++v)
    if (parent[v] >= 0) dag.parents[v] = {parent[v]};
  std::vector<BeliefValuation> vals;
  vals.reserve(n);
  for (int v = 0; v < n; ++v) {
    if (parent[v] < 0) {
      vals.push_back(src.marginal(Scope(m, {v})));
    } else {
      Scope fam(m, {v, parent[v]});
      vals.push_back(
          conditional(src.marginal(fam), fam, Scope(m, {parent[v]})));
    }
  }
  result.network = BeliefNetwork{std::move(dag), std::move(vals)};
  return result;
}

}  // namespace beltree
