#include "beltree/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "beltree/rng.hpp"

namespace beltree {

namespace {

Model make_model(int var_count, int domain_size, const char* prefix = "X") {
  std::vector<Variable> vars;
  vars.reserve(var_count);
  for (int i = 0; i < var_count; ++i) {
    Variable v;
    v.name = std::string(prefix) + std::to_string(i);
    for (int d = 0; d < domain_size; ++d)
      v.labels.push_back(std::to_string(d));
    vars.push_back(std::move(v));
  }
  return Model(std::move(vars));
}

// Uniform random labeled tree as (child, parent) pairs rooted at 0,
// children listed in breadth-first discovery order.
std::vector<std::pair<int, int>> random_tree_edges(int n, Rng& rng) {
  std::vector<std::vector<int>> adj(n);
  if (n == 2) {
    adj[0].push_back(1);
    adj[1].push_back(0);
  } else {
    std::vector<int> prufer(n - 2);
    for (auto& p : prufer) p = rng.next_int(n);
    std::vector<int> degree(n, 1);
    for (int p : prufer) ++degree[p];
    std::set<int> leaves;
    for (int v = 0; v < n; ++v)
      if (degree[v] == 1) leaves.insert(v);
    for (int p : prufer) {
      int leaf = *leaves.begin();
      leaves.erase(leaves.begin());
      adj[leaf].push_back(p);
      adj[p].push_back(leaf);
      if (--degree[p] == 1) leaves.insert(p);
    }
    int a = *leaves.begin(), b = *std::next(leaves.begin());
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::pair<int, int>> edges;
  std::vector<bool> seen(n, false);
  std::vector<int> queue{0};
  seen[0] = true;
  for (size_t i = 0; i < queue.size(); ++i) {
    for (int v : adj[queue[i]]) {
      if (!seen[v]) {
        seen[v] = true;
        edges.emplace_back(v, queue[i]);
        queue.push_back(v);
      }
    }
  }
  return edges;
}

}  // namespace

BeliefValuation random_proper_valuation(const Scope& scope, int extra,
                                        double floor, Rng& rng,
                                        bool surjective) {
  const uint32_t cc = scope.config_count();
  auto covers_domains = [&](uint64_t mask) {
    for (int p = 0; p < scope.size(); ++p) {
      std::vector<bool> seen(scope.domain_size(p), false);
      for (uint32_t idx = 0; idx < cc; ++idx)
        if (mask & (uint64_t{1} << idx)) seen[scope.decode(idx)[p]] = true;
      for (bool s : seen)
        if (!s) return false;
    }
    return true;
  };
  std::set<uint64_t> sets;
  const uint64_t frame = cc >= 64 ? ~uint64_t{0} : (uint64_t{1} << cc) - 1;
  while (static_cast<int>(sets.size()) < extra) {
    uint64_t m = rng.next_u64() & frame;
    if (m == 0 || m == frame) continue;
    if (surjective && !covers_domains(m)) continue;
    sets.insert(m);
  }
  std::vector<double> w(sets.size() + 1);
  double sum = 0;
  for (auto& x : w) {
    x = -std::log(1.0 - rng.next_unit());
    sum += x;
  }
  for (auto& x : w) x /= sum;
  // w.back() goes to the full frame; lift it to the floor.
  if (w.back() < floor) {
    double scale = (1.0 - floor) / (1.0 - w.back());
    for (size_t i = 0; i + 1 < w.size(); ++i) w[i] *= scale;
    w.back() = floor;
  }
  std::vector<std::pair<Bitmask, double>> entries;
  size_t i = 0;
  for (uint64_t s : sets) entries.emplace_back(Bitmask::from_word(cc, s), w[i++]);
  entries.emplace_back(Bitmask::full(cc), w.back());
  return BeliefValuation::from_masses(scope, entries);
}

namespace {

// Divergence of the factor from the independent product of its own
// single-variable marginals.
double independence_gap(const BeliefValuation& factor) {
  const Scope& s = factor.scope();
  BeliefValuation prod =
      combine(marginalize(factor, Scope(s.model(), {s.vars()[0]})),
              marginalize(factor, Scope(s.model(), {s.vars()[1]})));
  return delta_divergence(prod, factor);
}

// Smallest commonality of the joint over its focal elements, evaluated
// through the factorwise commonality product instead of a quadratic scan.
double min_focal_commonality(const BeliefValuation& joint,
                             const std::vector<BeliefValuation>& factors) {
  std::vector<std::vector<double>> q_tables;
  std::vector<std::vector<uint32_t>> proj;
  q_tables.reserve(factors.size());
  proj.reserve(factors.size());
  for (const auto& f : factors) {
    q_tables.push_back(dense_commonalities(f));
    proj.push_back(joint.scope().projection_to(f.scope()));
  }
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [set, mass] : joint.masses()) {
    (void)mass;
    double q = 1.0;
    for (size_t k = 0; k < factors.size(); ++k) {
      uint64_t small = 0;
      set.for_each_set(
          [&](uint32_t idx) { small |= uint64_t{1} << proj[k][idx]; });
      q *= q_tables[k][static_cast<size_t>(small)];
    }
    worst = std::min(worst, q);
  }
  return worst;
}

ConstructionSequence pairwise_sequence(
    const Model& model, const std::vector<std::pair<int, int>>& edges) {
  // Edges arrive in breadth-first order, so each child's parent was already
  // introduced: any earlier edge containing the parent is a branch.
  ConstructionSequence seq;
  seq.edges.emplace_back(model, std::vector<int>{edges[0].first, edges[0].second});
  seq.branch.push_back(-1);
  for (size_t k = 1; k < edges.size(); ++k) {
    seq.edges.emplace_back(model,
                           std::vector<int>{edges[k].first, edges[k].second});
    int br = -1;
    for (size_t j = 0; j < k; ++j) {
      if (edges[j].first == edges[k].second ||
          edges[j].second == edges[k].second) {
        br = static_cast<int>(j);
        break;
      }
    }
    seq.branch.push_back(br);
  }
  return seq;
}

std::vector<double> random_distribution(int n, double lo, Rng& rng) {
  std::vector<double> p(n);
  double sum = 0;
  for (auto& x : p) {
    x = rng.next_range(lo, 1.0);
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

}  // namespace

bool GeneratedTree::has_edge(int a, int b) const {
  for (auto [c, p] : edges) {
    if ((c == a && p == b) || (c == b && p == a)) return true;
  }
  return false;
}

GeneratedTree generate_tree_distribution(const GeneratorConfig& cfg) {
  if (cfg.var_count < 2 || cfg.var_count > 10)
    throw DataError("generator: variable count must be in [2, 10]");
  if (cfg.domain_size < 2 || cfg.domain_size > 4)
    throw DataError("generator: domain size must be in [2, 4]");
  if (cfg.q_min <= 0) throw DataError("generator: q_min must be positive");

  const Model model = make_model(cfg.var_count, cfg.domain_size);
  const int n_edges = cfg.var_count - 1;
  // Per-factor vacuous floor making every joint commonality >= q_min.
  const double floor =
      std::min(0.95, 1.05 * std::pow(cfg.q_min, 1.0 / std::max(1, n_edges)));

  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    Rng rng(cfg.seed + 0x9e3779b97f4a7c15ull * attempt);
    auto edges = random_tree_edges(cfg.var_count, rng);

    std::vector<BeliefValuation> factors;
    bool ok = true;
    if (cfg.bayesian) {
      // Conditional-probability links; the root marginal rides on the first
      // edge containing the root.
      for (auto [c, p] : edges) {
        Scope pair(model, {c, p});
        const int dc = model.var(c).labels.size();
        const int dp = model.var(p).labels.size();
        BeliefValuation::MassMap mm;
        double total = 0;
        for (int pv = 0; pv < dp; ++pv) {
          auto row = random_distribution(dc, 0.25, rng);
          for (int cv = 0; cv < dc; ++cv) {
            std::vector<int> values(2);
            values[pair.vars()[0] == c ? 0 : 1] = cv;
            values[pair.vars()[0] == c ? 1 : 0] = pv;
            Bitmask b(pair.config_count());
            b.set(pair.encode(values));
            mm[b] = row[cv];
            total += row[cv];
          }
        }
        mm[Bitmask(pair.config_count())] = 1.0 - total;
        factors.emplace_back(pair, std::move(mm));
      }
      BeliefValuation root_marg =
          BeliefValuation::bayesian(Scope(model, {0}), random_distribution(
                                        model.var(0).labels.size(), 0.25, rng));
      factors[0] = combine(factors[0], root_marg);
    } else {
      for (auto [c, p] : edges) {
        Scope pair(model, {c, p});
        BeliefValuation f = random_proper_valuation(pair, cfg.focal_per_factor, floor, rng, /*surjective=*/true);
        int tries = 0;
        while (independence_gap(f) < cfg.dependence_floor && ++tries < 200)
          f = random_proper_valuation(pair, cfg.focal_per_factor, floor, rng, /*surjective=*/true);
        if (tries >= 200) {
          ok = false;
          break;
        }
        factors.push_back(std::move(f));
      }
    }
    if (!ok) continue;

    ConstructionSequence seq = pairwise_sequence(model, edges);
    BeliefValuation joint = brute_force_joint(factors);
    if (!joint.is_proper(1e-7)) continue;
    if (!cfg.bayesian && min_focal_commonality(joint, factors) < cfg.q_min) continue;
    if (cfg.bayesian) {
      bool dependent = true;
      for (auto [c, p] : edges) {
        Scope pair(model, {c, p});
        BeliefValuation pm = marginalize(joint, pair);
        BeliefValuation prod = combine(marginalize(joint, Scope(model, {c})),
                                       marginalize(joint, Scope(model, {p})));
        if (delta_divergence(prod, pm) < cfg.dependence_floor) {
          dependent = false;
          break;
        }
      }
      if (!dependent) continue;
    }

    // Directed-tree network valuated from the joint's pairwise marginals.
    DagStructure dag{model, std::vector<std::vector<int>>(cfg.var_count)};
    for (auto [c, p] : edges) dag.parents[c] = {p};
    std::vector<BeliefValuation> vals;
    vals.reserve(cfg.var_count);
    for (int v = 0; v < cfg.var_count; ++v) {
      if (dag.parents[v].empty()) {
        vals.push_back(marginalize(joint, Scope(model, {v})));
      } else {
        Scope fam(model, {v, dag.parents[v][0]});
        vals.push_back(conditional(joint, fam, Scope(model, dag.parents[v])));
      }
    }

    GeneratedTree out{model,
                      std::move(edges),
                      std::move(seq),
                      std::move(factors),
                      std::move(joint),
                      BeliefNetwork{std::move(dag), std::move(vals)}};
    return out;
  }
  throw NumericError("generator: q_min " + std::to_string(cfg.q_min) +
                     " unreachable after " + std::to_string(cfg.max_retries) +
                     " retries (seed " + std::to_string(cfg.seed) + ")");
}

SampleDataset sample(const BeliefValuation& joint, int n, uint64_t seed) {
  if (n <= 0) throw DataError("sample: sample size must be positive");
  if (!joint.is_proper(1e-6))
    throw DataError("sample: pseudo-belief inputs have no sampling semantics");
  Rng rng(seed);
  std::vector<const Bitmask*> sets;
  std::vector<double> cum;
  double total = 0;
  for (const auto& [set, mass] : joint.masses()) {
    if (mass <= 0 || set.none()) continue;
    total += mass;
    sets.push_back(&set);
    cum.push_back(total);
  }
  if (sets.empty()) throw DataError("sample: no focal elements to draw");

  SampleDataset data{joint.scope(), {}};
  data.records.reserve(n);
  for (int i = 0; i < n; ++i) {
    double u = rng.next_unit() * total;
    size_t lo = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
    if (lo >= sets.size()) lo = sets.size() - 1;
    data.records.push_back(*sets[lo]);
  }
  return data;
}

MarkovTree generate_random_hypertree(const HypertreeConfig& cfg) {
  if (cfg.var_count < 2) throw DataError("hypertree generator: too few variables");
  if (cfg.min_edge_size < 2 || cfg.max_edge_size < cfg.min_edge_size)
    throw DataError("hypertree generator: bad edge-size bounds");
  const Model model = make_model(cfg.var_count, cfg.domain_size);
  Rng rng(cfg.seed);

  ConstructionSequence seq;
  int used = std::min(cfg.var_count,
                      cfg.min_edge_size +
                          rng.next_int(cfg.max_edge_size - cfg.min_edge_size + 1));
  std::vector<int> first(used);
  for (int i = 0; i < used; ++i) first[i] = i;
  seq.edges.emplace_back(model, std::move(first));
  seq.branch.push_back(-1);

  while (used < cfg.var_count) {
    int branch = rng.next_int(seq.size());
    const auto& bvars = seq.edges[branch].vars();
    int sep_size = 1 + rng.next_int(std::min<int>(bvars.size(),
                                                  cfg.max_edge_size - 1));
    std::vector<int> pool = bvars;
    std::vector<int> edge;
    for (int i = 0; i < sep_size; ++i) {
      int pick = rng.next_int(static_cast<int>(pool.size()));
      edge.push_back(pool[pick]);
      pool.erase(pool.begin() + pick);
    }
    int fresh = std::min(cfg.var_count - used,
                         1 + rng.next_int(cfg.max_edge_size - sep_size));
    for (int i = 0; i < fresh; ++i) edge.push_back(used++);
    seq.edges.emplace_back(model, std::move(edge));
    seq.branch.push_back(branch);
  }

  const int n_edges = seq.size();
  const double floor =
      std::min(0.95, 1.05 * std::pow(cfg.q_min, 1.0 / std::max(1, n_edges)));
  std::vector<BeliefValuation> factors;
  factors.reserve(n_edges);
  for (int k = 0; k < n_edges; ++k)
    factors.push_back(
        random_proper_valuation(seq.edges[k], cfg.focal_per_factor, floor, rng));
  return build_markov_tree(seq, std::move(factors));
}

GeneratedBayesNet generate_random_bayes_net(int var_count, double edge_prob,
                                            uint64_t seed) {
  if (var_count < 2 || var_count > 8)
    throw DataError("bayes-net generator: variable count must be in [2, 8]");
  const Model model = make_model(var_count, 2);
  Rng rng(seed);

  DagStructure dag{model, std::vector<std::vector<int>>(var_count)};
  for (int v = 1; v < var_count; ++v) {
    for (int p = 0; p < v && static_cast<int>(dag.parents[v].size()) < 2; ++p) {
      if (rng.next_bool(edge_prob)) dag.parents[v].push_back(p);
    }
  }

  // Conditional tables with entries bounded away from zero.
  std::vector<std::vector<double>> cpt(var_count);
  for (int v = 0; v < var_count; ++v) {
    int rows = 1;
    for (int p : dag.parents[v]) rows *= model.var(p).labels.size();
    for (int r = 0; r < rows; ++r) {
      auto row = random_distribution(model.var(v).labels.size(), 0.15, rng);
      cpt[v].insert(cpt[v].end(), row.begin(), row.end());
    }
  }

  Scope full = Scope::full(model);
  std::vector<double> probs(full.config_count());
  for (uint32_t idx = 0; idx < full.config_count(); ++idx) {
    auto values = full.decode(idx);
    double p = 1.0;
    for (int v = 0; v < var_count; ++v) {
      int row = 0;
      for (int par : dag.parents[v])
        row = row * model.var(par).labels.size() + values[par];
      p *= cpt[v][row * model.var(v).labels.size() + values[v]];
    }
    probs[idx] = p;
  }
  BeliefValuation joint = BeliefValuation::bayesian(full, probs);

  std::vector<BeliefValuation> vals;
  vals.reserve(var_count);
  for (int v = 0; v < var_count; ++v) {
    Scope fam = dag.family(v);
    vals.push_back(dag.parents[v].empty()
                       ? marginalize(joint, fam)
                       : conditional(joint, fam, Scope(model, dag.parents[v])));
  }
  return GeneratedBayesNet{BeliefNetwork{std::move(dag), std::move(vals)},
                           std::move(joint)};
}

}  // namespace beltree
