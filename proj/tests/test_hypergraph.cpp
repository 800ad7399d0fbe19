#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "beltree/hypergraph.hpp"

using namespace beltree;

namespace {

Model letters(int n) {
  std::vector<Variable> vars;
  for (int i = 0; i < n; ++i)
    vars.push_back(Variable{std::string(1, char('A' + i)), {"0", "1"}});
  return Model(std::move(vars));
}

Scope edge(const Model& m, std::vector<std::string> names) {
  return Scope::of(m, names);
}

// Five-variable reference hypergraph {ABC, CD, DE, AE}; it has no twig.
Hypergraph cyclic_reference(const Model& m) {
  return Hypergraph::over(m, {edge(m, {"A", "B", "C"}), edge(m, {"C", "D"}),
                              edge(m, {"D", "E"}), edge(m, {"A", "E"})});
}

}  // namespace

TEST_CASE("reduction keeps only maximal edges") {
  Model m = letters(3);
  Hypergraph single = Hypergraph::over(m, {edge(m, {"A", "B"})});
  CHECK(reduce(single).edges() == single.edges());

  Hypergraph nested =
      Hypergraph::over(m, {edge(m, {"A"}), edge(m, {"A", "B"})});
  CHECK(reduce(nested).edges() == std::vector<Scope>{edge(m, {"A", "B"})});

  Hypergraph mixed = Hypergraph::over(
      m, {edge(m, {"A", "B"}), edge(m, {"B", "C"}), edge(m, {"B"})});
  Hypergraph r = reduce(mixed);
  CHECK(r.edge_count() == 2);
  CHECK(covers(r, mixed));
  CHECK(covers(mixed, r));
  CHECK(reduce(r).edges() == r.edges());  // idempotent
}

TEST_CASE("covering") {
  Model m = letters(3);
  Hypergraph chain =
      Hypergraph::over(m, {edge(m, {"A", "B"}), edge(m, {"B", "C"})});
  CHECK(covers(chain, chain));

  Hypergraph whole = Hypergraph(Scope::full(m), {edge(m, {"A", "B", "C"})});
  CHECK(covers(whole, chain));
  CHECK_FALSE(covers(chain, Hypergraph(Scope::full(m), {edge(m, {"A", "C"})})));

  // Transitivity: chain covers its sub-edges, the wide edge covers the chain.
  Hypergraph subs =
      Hypergraph(Scope::full(m), {edge(m, {"A"}), edge(m, {"B", "C"})});
  CHECK(covers(chain, subs));
  CHECK(covers(whole, subs));
}

TEST_CASE("twig detection") {
  Model m = letters(5);

  SUBCASE("two overlapping edges are twigs of each other") {
    Hypergraph chain =
        Hypergraph::over(m, {edge(m, {"A", "B"}), edge(m, {"B", "C"})});
    auto twigs = find_twigs(chain);
    REQUIRE(twigs.size() == 2);
    CHECK(twigs[0].branches == std::vector<int>{1});
    CHECK(twigs[1].branches == std::vector<int>{0});
  }

  SUBCASE("the cyclic reference hypergraph has no twig") {
    CHECK(find_twigs(cyclic_reference(m)).empty());
  }

  SUBCASE("three-edge chain") {
    Hypergraph chain = Hypergraph::over(
        m, {edge(m, {"A", "B"}), edge(m, {"B", "C"}), edge(m, {"C", "D"})});
    auto twigs = find_twigs(chain);
    REQUIRE(twigs.size() == 2);
    // Edges sort as AB, BC, CD: the ends are twigs with the middle as branch.
    CHECK(twigs[0].twig == 0);
    CHECK(twigs[0].branches == std::vector<int>{1});
    CHECK(twigs[1].twig == 2);
    CHECK(twigs[1].branches == std::vector<int>{1});
  }
}

TEST_CASE("construction sequences") {
  Model m = letters(5);

  SUBCASE("single hyperedge") {
    auto seq = construction_sequence(
        Hypergraph::over(m, {edge(m, {"A", "B", "C"})}));
    REQUIRE(seq.has_value());
    CHECK(seq->size() == 1);
    CHECK(validate_construction_sequence(*seq));
  }

  SUBCASE("three-edge chain orders and validates") {
    Hypergraph chain = Hypergraph::over(
        m, {edge(m, {"A", "B"}), edge(m, {"B", "C"}), edge(m, {"C", "D"})});
    auto seq = construction_sequence(chain);
    REQUIRE(seq.has_value());
    CHECK(seq->size() == 3);
    CHECK(validate_construction_sequence(*seq));
    // Every edge of the input appears exactly once.
    Hypergraph back = seq->as_hypergraph();
    CHECK(back.edges() == chain.edges());
  }

  SUBCASE("the cyclic reference hypergraph has no sequence") {
    CHECK_FALSE(construction_sequence(cyclic_reference(m)).has_value());
  }

  SUBCASE("unreduced input is rejected") {
    Hypergraph nested =
        Hypergraph::over(m, {edge(m, {"A"}), edge(m, {"A", "B"})});
    CHECK_THROWS_AS(construction_sequence(nested), DataError);
  }
}

TEST_CASE("hypertree covers") {
  Model m = letters(6);

  SUBCASE("a hypertree covers itself") {
    Hypergraph chain = Hypergraph::over(
        m, {edge(m, {"A", "B"}), edge(m, {"B", "C"}), edge(m, {"C", "D"})});
    ConstructionSequence seq = hypertree_cover(chain);
    CHECK(validate_construction_sequence(seq));
    CHECK(seq.as_hypergraph().edges() == chain.edges());
  }

  SUBCASE("cyclic reference hypergraph gets a proper cover") {
    Model m5 = letters(5);
    Hypergraph h = cyclic_reference(m5);
    ConstructionSequence seq = hypertree_cover(h);
    CHECK(validate_construction_sequence(seq));
    CHECK(covers(seq.as_hypergraph(), h));
    int width = 0;
    for (const auto& e : seq.edges) width = std::max(width, e.size());
    CHECK(width <= 3);
  }

  SUBCASE("second reference hypergraph gets a valid cover") {
    Hypergraph h = Hypergraph::over(
        m, {edge(m, {"A", "B", "C"}), edge(m, {"C", "D"}), edge(m, {"D", "E"}),
            edge(m, {"A", "E"}), edge(m, {"B", "F"}), edge(m, {"F", "D"})});
    ConstructionSequence seq = hypertree_cover(h);
    CHECK(validate_construction_sequence(seq));
    CHECK(covers(seq.as_hypergraph(), h));
  }

  SUBCASE("disconnected hypergraphs still get one connected cover") {
    Hypergraph h =
        Hypergraph::over(m, {edge(m, {"A", "B"}), edge(m, {"D", "E"})});
    ConstructionSequence seq = hypertree_cover(h);
    CHECK(validate_construction_sequence(seq));
    CHECK(covers(seq.as_hypergraph(), h));
  }
}
