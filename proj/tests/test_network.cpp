#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "beltree/experiments.hpp"
#include "beltree/generator.hpp"
#include "beltree/network.hpp"
#include "beltree/rng.hpp"

using namespace beltree;

namespace {

Model letters(int n) {
  std::vector<Variable> vars;
  for (int i = 0; i < n; ++i)
    vars.push_back(Variable{std::string(1, char('A' + i)), {"0", "1"}});
  return Model(std::move(vars));
}

DagStructure dag_of(const Model& m,
                    std::vector<std::vector<std::string>> parents) {
  DagStructure d{m, std::vector<std::vector<int>>(m.size())};
  for (int v = 0; v < m.size(); ++v) {
    for (const auto& p : parents[v]) d.parents[v].push_back(m.require(p));
    std::sort(d.parents[v].begin(), d.parents[v].end());
  }
  return d;
}

}  // namespace

TEST_CASE("induced hypergraphs") {
  Model m = letters(5);

  SUBCASE("edgeless graph induces singletons") {
    Model m2 = letters(2);
    DagStructure d = dag_of(m2, {{}, {}});
    Hypergraph h = induced_hypergraph(d);
    CHECK(h.edge_count() == 2);
    CHECK(h.edges()[0] == Scope::of(m2, {"A"}));
    CHECK(h.edges()[1] == Scope::of(m2, {"B"}));
  }

  SUBCASE("family sets get reduced") {
    // C->B, C->D, D->E, E->A: the lone family {C} disappears into {B,C}.
    DagStructure d = dag_of(m, {{"E"}, {"C"}, {}, {"C"}, {"D"}});
    Hypergraph h = induced_hypergraph(d);
    std::vector<Scope> want = {Scope::of(m, {"A", "E"}), Scope::of(m, {"B", "C"}),
                               Scope::of(m, {"C", "D"}), Scope::of(m, {"D", "E"})};
    std::sort(want.begin(), want.end());
    CHECK(h.edges() == want);
  }

  SUBCASE("chain") {
    Model m3 = letters(3);
    DagStructure d = dag_of(m3, {{}, {"A"}, {"B"}});
    Hypergraph h = induced_hypergraph(d);
    CHECK(h.edges() == std::vector<Scope>{Scope::of(m3, {"A", "B"}),
                                          Scope::of(m3, {"B", "C"})});
  }
}

TEST_CASE("compatibility with the reference hypergraphs") {
  Model m = letters(5);
  Hypergraph h = Hypergraph::over(
      m, {Scope::of(m, {"A", "B", "C"}), Scope::of(m, {"C", "D"}),
          Scope::of(m, {"D", "E"}), Scope::of(m, {"A", "E"})});

  // The four compatible orientations, parents listed per A..E.
  std::vector<DagStructure> known = {
      dag_of(m, {{"E"}, {"A", "C"}, {}, {"C"}, {"D"}}),
      dag_of(m, {{"E"}, {"A", "C"}, {"D"}, {}, {"D"}}),
      dag_of(m, {{"E"}, {"A", "C"}, {"D"}, {"E"}, {}}),
      dag_of(m, {{}, {"A", "C"}, {"D"}, {"E"}, {"A"}}),
  };
  for (const auto& d : known) {
    CHECK(d.is_acyclic());
    CHECK(is_compatible(d, h));
    CHECK(is_compatible(d, induced_hypergraph(d)));
  }

  // Missing the B family breaks compatibility.
  DagStructure wrong = dag_of(m, {{"E"}, {"C"}, {}, {"C"}, {"D"}});
  CHECK_FALSE(is_compatible(wrong, h));
}

TEST_CASE("exhaustive structure enumeration") {
  SUBCASE("a single pair admits both orientations") {
    Model m = letters(2);
    Hypergraph h = Hypergraph::over(m, {Scope::of(m, {"A", "B"})});
    auto dags = enumerate_compatible(h);
    CHECK(dags.size() == 2);
  }

  SUBCASE("the five-variable reference admits exactly four structures") {
    auto r = experiments::reference_examples();
    CHECK(r.first_count == 4);
    CHECK(r.structures_match);
    CHECK(r.second_count == 0);
    CHECK(r.pass());
  }
}

TEST_CASE("d-separation") {
  Model m3 = letters(3);

  SUBCASE("chain blocks through the middle") {
    DagStructure chain = dag_of(m3, {{}, {"A"}, {"B"}});
    CHECK(d_separated(chain, {0}, {2}, {1}));
    CHECK_FALSE(d_separated(chain, {0}, {2}, {}));
  }

  SUBCASE("collider blocks when unobserved") {
    DagStructure collider = dag_of(m3, {{}, {"A", "C"}, {}});
    CHECK(d_separated(collider, {0}, {2}, {}));
    CHECK_FALSE(d_separated(collider, {0}, {2}, {1}));
  }

  SUBCASE("the reference orientation separates A and C given D,E") {
    Model m = letters(5);
    DagStructure d = dag_of(m, {{"E"}, {"A", "C"}, {}, {"C"}, {"D"}});
    CHECK(d_separated(d, {0}, {2}, {3, 4}));
    CHECK_FALSE(d_separated(d, {0}, {2}, {}));
  }
}

TEST_CASE("conditional independence on distributions") {
  Model m = letters(2);
  Scope sa = Scope::of(m, {"A"}), sb = Scope::of(m, {"B"});

  SUBCASE("product distributions factor") {
    BeliefValuation prod = combine(BeliefValuation::bayesian(sa, {0.3, 0.7}),
                                   BeliefValuation::bayesian(sb, {0.8, 0.2}));
    CHECK(ci_holds(prod, {0}, {1}, {}));
  }

  SUBCASE("bayesian chain screens the ends") {
    Model m3 = letters(3);
    Scope full = Scope::full(m3);
    std::vector<double> pa = {0.3, 0.7};
    double pb_a[2][2] = {{0.2, 0.8}, {0.6, 0.4}};
    double pc_b[2][2] = {{0.4, 0.6}, {0.9, 0.1}};
    std::vector<double> table(8);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          table[full.encode({a, b, c})] = pa[a] * pb_a[a][b] * pc_b[b][c];
    BeliefValuation bel = BeliefValuation::bayesian(full, table);
    CHECK(ci_holds(bel, {0}, {2}, {1}));
    CHECK_FALSE(ci_holds(bel, {0}, {2}, {}));
    CHECK_THROWS_AS(ci_holds(bel, {0}, {0}, {1}), DataError);
  }

  SUBCASE("separation implies independence on generated tree networks") {
    for (uint64_t seed = 40; seed < 44; ++seed) {
      GeneratorConfig cfg;
      cfg.var_count = 5;
      cfg.seed = seed;
      GeneratedTree gen = generate_tree_distribution(cfg);
      const int n = cfg.var_count;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          for (int l = 0; l < n; ++l) {
            if (l == a || l == b) continue;
            if (d_separated(gen.network.dag, {a}, {b}, {l}))
              CHECK(ci_holds(gen.joint, {a}, {b}, {l}));
          }
    }
  }
}

TEST_CASE("hypertree conversion") {
  SUBCASE("single hyperedge bayesian joint") {
    Model m = letters(2);
    Scope sab = Scope::full(m);
    BeliefValuation joint =
        BeliefValuation::bayesian(sab, {0.1, 0.3, 0.2, 0.4});
    ConstructionSequence seq{{sab}, {-1}};
    MarkovTree tree = build_markov_tree(seq, {joint});
    BeliefNetwork net = hypertree_to_network(tree);

    CHECK(net.dag.parents[0].empty());
    CHECK(net.dag.parents[1] == std::vector<int>{0});
    CHECK(mass_distance(network_joint(net), joint) < 1e-9);
    // First node holds the plain marginal, second the conditional table.
    CHECK(mass_distance(net.node_valuations[0],
                        marginalize(joint, Scope::of(m, {"A"}))) < 1e-9);
    BeliefValuation cond = mk_condition(joint, Scope::of(m, {"A"}));
    CHECK(mass_distance(net.node_valuations[1], cond) < 1e-9);
  }

  SUBCASE("three-edge hypertree round-trips") {
    Model m = letters(4);
    Scope sab = Scope::of(m, {"A", "B"});
    Scope sbc = Scope::of(m, {"B", "C"});
    Scope scd = Scope::of(m, {"C", "D"});
    Rng rng(123);
    ConstructionSequence seq{{sab, sbc, scd}, {-1, 0, 1}};
    MarkovTree tree = build_markov_tree(
        seq, {random_proper_valuation(sab, 3, 0.15, rng),
              random_proper_valuation(sbc, 3, 0.15, rng),
              random_proper_valuation(scd, 3, 0.15, rng)});
    BeliefNetwork net = hypertree_to_network(tree);
    CHECK(mass_distance(network_joint(net), brute_force_joint(tree.factors)) <
          1e-9);
    CHECK(induced_hypergraph(net.dag).edges() ==
          reduce(tree.seq.as_hypergraph()).edges());
  }

  SUBCASE("bayesian hypertrees store true conditional tables") {
    GeneratorConfig cfg;
    cfg.var_count = 4;
    cfg.bayesian = true;
    cfg.seed = 7;
    GeneratedTree gen = generate_tree_distribution(cfg);
    MarkovTree tree = build_markov_tree(gen.sequence, gen.factors);
    BeliefNetwork net = hypertree_to_network(tree);
    CHECK(mass_distance(network_joint(net), gen.joint) < 1e-9);
    for (int v = 0; v < net.dag.size(); ++v) {
      Scope fam = net.dag.family(v);
      BeliefValuation want =
          net.dag.parents[v].empty()
              ? marginalize(gen.joint, fam)
              : conditional(gen.joint, fam,
                            Scope(gen.model, net.dag.parents[v]));
      CHECK(mass_distance(net.node_valuations[v], want) < 1e-7);
    }
  }

  SUBCASE("splitting keeps wide groups consistent") {
    // One 3-variable root edge plus a pair: the root group is chain-split.
    Model m = letters(4);
    Scope sabc = Scope::of(m, {"A", "B", "C"});
    Scope scd = Scope::of(m, {"C", "D"});
    Rng rng(321);
    ConstructionSequence seq{{sabc, scd}, {-1, 0}};
    MarkovTree tree = build_markov_tree(
        seq, {random_proper_valuation(sabc, 4, 0.15, rng),
              random_proper_valuation(scd, 3, 0.15, rng)});
    BeliefNetwork net = hypertree_to_network(tree);
    CHECK(mass_distance(network_joint(net), brute_force_joint(tree.factors)) <
          1e-9);
    CHECK(induced_hypergraph(net.dag).edges() ==
          reduce(tree.seq.as_hypergraph()).edges());
    // In-group chain: A has no parents, B gets A, C gets A and B.
    CHECK(net.dag.parents[0].empty());
    CHECK(net.dag.parents[1] == std::vector<int>{0});
    CHECK(net.dag.parents[2] == std::vector<int>{0, 1});
    CHECK(net.dag.parents[3] == std::vector<int>{2});
  }

  SUBCASE("chain-split factors recombine to the edge conditional") {
    // A single wide hyperedge: the whole network is the split of one
    // valuation, so the recombined chain must reproduce it exactly.
    Model m = letters(3);
    Scope sabc = Scope::full(m);
    Rng rng(55);
    BeliefValuation factor = random_proper_valuation(sabc, 5, 0.2, rng);
    ConstructionSequence seq{{sabc}, {-1}};
    MarkovTree tree = build_markov_tree(seq, {factor});
    BeliefNetwork net = hypertree_to_network(tree);
    CHECK(mass_distance(network_joint(net), factor) < 1e-9);
  }
}

TEST_CASE("conversion reports unpeelable valuations") {
  Model m = letters(2);
  Scope sab = Scope::full(m);
  // Pseudo factor whose marginal on A loses its a0 support by cancellation
  // while the factor itself keeps nonzero commonality there; the in-edge
  // conditional cannot be formed.
  Bitmask s00(4), s01(4), s10(4), both0(4);
  s00.set(sab.encode({0, 0}));
  s01.set(sab.encode({0, 1}));
  s10.set(sab.encode({1, 0}));
  both0.set(sab.encode({0, 0}));
  both0.set(sab.encode({0, 1}));
  BeliefValuation pseudo = BeliefValuation::from_masses(
      sab, {{s00, 0.5}, {s01, 0.5}, {both0, -1.0}, {s10, 1.0}});
  CHECK(pseudo.mass_sum() == doctest::Approx(1.0));

  ConstructionSequence seq{{sab}, {-1}};
  MarkovTree tree = build_markov_tree(seq, {pseudo});
  CHECK_THROWS_AS(hypertree_to_network(tree), DecombinationError);
}
