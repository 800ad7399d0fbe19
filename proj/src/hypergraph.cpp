#include "beltree/hypergraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>

namespace beltree {

namespace {

bool subset(const Scope& a, const Scope& b) { return b.contains(a); }

bool is_reduced(const std::vector<Scope>& edges) {
  for (size_t i = 0; i < edges.size(); ++i) {
    for (size_t j = 0; j < edges.size(); ++j) {
      if (i != j && subset(edges[i], edges[j])) return false;
    }
  }
  return true;
}

// Twig test for edges[t] within the sub-hypergraph given by `present`,
// returning all admissible branches.
std::vector<int> branches_for(const std::vector<Scope>& edges,
                              const std::vector<int>& present, int t) {
  // Vertices of t shared with any other present edge.
  std::set<int> shared;
  for (int j : present) {
    if (j == t) continue;
    for (int v : edges[t].set_intersect(edges[j]).vars()) shared.insert(v);
  }
  std::vector<int> out;
  for (int b : present) {
    if (b == t) continue;
    if (edges[t].set_intersect(edges[b]).is_empty()) continue;
    bool ok = true;
    for (int v : shared) {
      if (!edges[b].contains_var(v)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(b);
  }
  return out;
}

}  // namespace

Hypergraph::Hypergraph(Scope vertices, std::vector<Scope> hyperedges)
    : vertices_(std::move(vertices)) {
  if (hyperedges.empty())
    throw DataError("hypergraph requires at least one hyperedge");
  for (const auto& e : hyperedges) {
    if (e.is_empty()) throw DataError("hyperedges must be nonempty");
    if (!vertices_.contains(e))
      throw DataError("hyperedge outside the vertex set");
  }
  std::sort(hyperedges.begin(), hyperedges.end());
  hyperedges.erase(std::unique(hyperedges.begin(), hyperedges.end()),
                   hyperedges.end());
  edges_ = std::move(hyperedges);
}

Hypergraph Hypergraph::over(const Model& m, std::vector<Scope> hyperedges) {
  if (hyperedges.empty())
    throw DataError("hypergraph requires at least one hyperedge");
  if (!(hyperedges.front().model() == m))
    throw DataError("hyperedges built over a different model");
  Scope verts = hyperedges.front();
  for (const auto& e : hyperedges) verts = verts.set_union(e);
  return Hypergraph(std::move(verts), std::move(hyperedges));
}

Hypergraph ConstructionSequence::as_hypergraph() const {
  return Hypergraph::over(edges.front().model(), edges);
}

Hypergraph reduce(const Hypergraph& h) {
  std::vector<Scope> kept;
  const auto& e = h.edges();
  for (size_t i = 0; i < e.size(); ++i) {
    bool contained = false;
    for (size_t j = 0; j < e.size(); ++j) {
      if (i != j && subset(e[i], e[j])) {
        contained = true;
        break;
      }
    }
    if (!contained) kept.push_back(e[i]);
  }
  return Hypergraph(h.vertices(), std::move(kept));
}

bool covers(const Hypergraph& h, const Hypergraph& hp) {
  for (const auto& ep : hp.edges()) {
    bool found = false;
    for (const auto& e : h.edges()) {
      if (subset(ep, e)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<TwigInfo> find_twigs(const Hypergraph& h) {
  std::vector<int> all(h.edge_count());
  for (int i = 0; i < h.edge_count(); ++i) all[i] = i;
  std::vector<TwigInfo> out;
  for (int t = 0; t < h.edge_count(); ++t) {
    auto b = branches_for(h.edges(), all, t);
    if (!b.empty()) out.push_back(TwigInfo{t, std::move(b)});
  }
  return out;
}

std::optional<ConstructionSequence> construction_sequence(const Hypergraph& h) {
  if (!is_reduced(h.edges()))
    throw DataError("construction_sequence expects a reduced hypergraph");
  const auto& edges = h.edges();
  const int n = h.edge_count();
  if (n == 1) {
    ConstructionSequence seq;
    seq.edges = edges;
    seq.branch = {-1};
    return seq;
  }

  std::vector<int> present(n);
  for (int i = 0; i < n; ++i) present[i] = i;
  // (twig, branch) in deletion order; edges_ are already lexicographically
  // sorted, so the smallest admissible index is the smallest edge.
  std::vector<std::pair<int, int>> deleted;
  while (present.size() > 1) {
    int twig = -1, branch = -1;
    for (int t : present) {
      auto b = branches_for(edges, present, t);
      if (!b.empty()) {
        twig = t;
        branch = b.front();
        break;
      }
    }
    if (twig < 0) return std::nullopt;
    deleted.emplace_back(twig, branch);
    present.erase(std::find(present.begin(), present.end(), twig));
  }

  ConstructionSequence seq;
  std::map<int, int> position;
  seq.edges.push_back(edges[present.front()]);
  seq.branch.push_back(-1);
  position[present.front()] = 0;
  for (size_t i = deleted.size(); i-- > 0;) {
    auto [t, b] = deleted[i];
    position[t] = seq.size();
    seq.edges.push_back(edges[t]);
    seq.branch.push_back(position.at(b));
  }
  return seq;
}

bool validate_construction_sequence(const ConstructionSequence& seq) {
  const int n = seq.size();
  if (n == 0 || static_cast<int>(seq.branch.size()) != n) return false;
  if (seq.branch[0] != -1) return false;
  for (int k = 1; k < n; ++k) {
    int b = seq.branch[k];
    if (b < 0 || b >= k) return false;
    const Scope& t = seq.edges[k];
    if (t.set_intersect(seq.edges[b]).is_empty()) return false;
    // Every vertex of t shared with an earlier edge must lie in the branch.
    for (int j = 0; j < k; ++j) {
      for (int v : t.set_intersect(seq.edges[j]).vars()) {
        if (!seq.edges[b].contains_var(v)) return false;
      }
    }
  }
  // Distinct edges.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (seq.edges[i] == seq.edges[j]) return false;
  return true;
}

ConstructionSequence hypertree_cover(const Hypergraph& h) {
  Hypergraph reduced = reduce(h);
  if (auto seq = construction_sequence(reduced)) return *seq;

  const Model& model = h.vertices().model();
  // Primal graph: each hyperedge forms a clique over its variables.
  std::vector<int> verts = h.vertices().vars();
  std::map<int, std::set<int>> adj;
  for (int v : verts) adj[v];
  for (const auto& e : h.edges()) {
    for (int a : e.vars())
      for (int b : e.vars())
        if (a != b) adj[a].insert(b);
  }
  // Bridge disconnected components so the elimination cliques chain up into
  // one hypertree.
  {
    std::map<int, int> comp;
    int nc = 0;
    for (int v : verts) {
      if (comp.count(v)) continue;
      std::vector<int> stack{v};
      comp[v] = nc;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adj[x]) {
          if (!comp.count(y)) {
            comp[y] = nc;
            stack.push_back(y);
          }
        }
      }
      ++nc;
    }
    std::vector<int> rep(nc, -1);
    for (int v : verts) {
      if (rep[comp[v]] < 0) rep[comp[v]] = v;
    }
    for (int c = 1; c < nc; ++c) {
      adj[rep[c - 1]].insert(rep[c]);
      adj[rep[c]].insert(rep[c - 1]);
    }
  }

  // Min-fill elimination; ties broken by clique size, then variable name.
  std::set<int> remaining(verts.begin(), verts.end());
  std::vector<Scope> cliques;
  while (!remaining.empty()) {
    int best = -1;
    std::tuple<long, size_t, std::string> best_key;
    for (int v : remaining) {
      std::vector<int> nbrs;
      for (int u : adj[v])
        if (remaining.count(u)) nbrs.push_back(u);
      long fill = 0;
      for (size_t i = 0; i < nbrs.size(); ++i)
        for (size_t j = i + 1; j < nbrs.size(); ++j)
          if (!adj[nbrs[i]].count(nbrs[j])) ++fill;
      std::tuple<long, size_t, std::string> key{fill, nbrs.size(),
                                                model.var(v).name};
      if (best < 0 || key < best_key) {
        best = v;
        best_key = std::move(key);
      }
    }
    std::vector<int> clique{best};
    for (int u : adj[best])
      if (remaining.count(u)) clique.push_back(u);
    for (size_t i = 1; i < clique.size(); ++i) {
      for (size_t j = i + 1; j < clique.size(); ++j) {
        adj[clique[i]].insert(clique[j]);
        adj[clique[j]].insert(clique[i]);
      }
    }
    cliques.emplace_back(model, clique);
    remaining.erase(best);
  }

  Hypergraph cover = reduce(Hypergraph(h.vertices(), std::move(cliques)));
  auto seq = construction_sequence(cover);
  if (!seq)
    throw NumericError("hypertree_cover: elimination cliques did not order");
  if (!covers(cover, h))
    throw NumericError("hypertree_cover: produced cover misses an edge");
  return *seq;
}

}  // namespace beltree
