#pragma once

#include <optional>
#include <vector>

#include "beltree/model.hpp"

namespace beltree {

// Hyperedges over a vertex set of model variables. Duplicate edges collapse
// at construction; edges are kept in canonical (variable-index lexicographic)
// order so edge-set comparisons are plain vector comparisons.
class Hypergraph {
 public:
  Hypergraph(Scope vertices, std::vector<Scope> hyperedges);

  // Vertex set taken as the union of the edges.
  static Hypergraph over(const Model& m, std::vector<Scope> hyperedges);

  const Scope& vertices() const { return vertices_; }
  const std::vector<Scope>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool operator==(const Hypergraph& o) const {
    return vertices_ == o.vertices_ && edges_ == o.edges_;
  }

 private:
  Scope vertices_;
  std::vector<Scope> edges_;
};

// An ordering of hyperedges in which every edge is a twig of its prefix; the
// branch index points at one witness branch earlier in the order.
struct ConstructionSequence {
  std::vector<Scope> edges;
  std::vector<int> branch;  // branch[0] == -1; 0 <= branch[k] < k otherwise

  int size() const { return static_cast<int>(edges.size()); }
  Scope separator(int k) const { return edges[k].set_intersect(edges[branch[k]]); }
  Hypergraph as_hypergraph() const;
};

struct TwigInfo {
  int twig;
  std::vector<int> branches;
};

// Keeps only the inclusion-maximal hyperedges.
Hypergraph reduce(const Hypergraph& h);

// True iff every edge of hp is contained in some edge of h.
bool covers(const Hypergraph& h, const Hypergraph& hp);

// All twigs with their admissible branches. Defined for >= 2 edges.
std::vector<TwigInfo> find_twigs(const Hypergraph& h);

// A valid construction sequence if h (reduced) is a hypertree, else nullopt.
// Deterministic: the lexicographically smallest twig is deleted first.
std::optional<ConstructionSequence> construction_sequence(const Hypergraph& h);

// Re-checks the twig property of every prefix directly against the
// definition; independent of the sequence builder.
bool validate_construction_sequence(const ConstructionSequence& seq);

// A hypertree covering h: h's own sequence when h already is a hypertree,
// otherwise the elimination cliques of a min-fill ordering. No optimality
// claim.
ConstructionSequence hypertree_cover(const Hypergraph& h);

}  // namespace beltree
