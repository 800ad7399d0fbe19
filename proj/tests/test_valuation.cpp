#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "beltree/generator.hpp"
#include "beltree/rng.hpp"
#include "beltree/valuation.hpp"

using namespace beltree;

namespace {

Model ab_model() {
  return Model({Variable{"A", {"a0", "a1"}}, Variable{"B", {"b0", "b1"}}});
}

Model abc_model() {
  return Model({Variable{"A", {"a0", "a1"}}, Variable{"B", {"b0", "b1"}},
                Variable{"C", {"c0", "c1"}}});
}

// P(a0,b0)=0.1  P(a0,b1)=0.3  P(a1,b0)=0.2  P(a1,b1)=0.4; P(a0)=0.4.
BeliefValuation joint_2x2(const Model& m) {
  return BeliefValuation::bayesian(Scope::of(m, {"A", "B"}),
                                   {0.1, 0.3, 0.2, 0.4});
}

}  // namespace

TEST_CASE("commonality") {
  Model m = ab_model();
  Scope sa = Scope::of(m, {"A"});

  BeliefValuation vac = BeliefValuation::vacuous(sa);
  CHECK(commonality_at(vac, ConfigSet::of_labels(sa, {{"a0"}})) ==
        doctest::Approx(1.0));

  BeliefValuation bay = BeliefValuation::bayesian(sa, {0.3, 0.7});
  CHECK(commonality_at(bay, ConfigSet::empty(sa)) == doctest::Approx(1.0));
  CHECK(commonality_at(bay, ConfigSet::of_labels(sa, {{"a0"}})) ==
        doctest::Approx(0.3));
  CHECK(commonality_at(bay, ConfigSet::full(sa)) == doctest::Approx(0.0));

  Scope sb = Scope::of(m, {"B"});
  BeliefValuation other = BeliefValuation::vacuous(sb);
  CHECK_THROWS_AS(commonality_at(other, ConfigSet::full(sa)), ScopeError);
}

TEST_CASE("moebius inversion of commonality tables") {
  Model m = ab_model();
  Scope sa = Scope::of(m, {"A"});

  SUBCASE("all-ones table is the vacuous valuation") {
    std::vector<double> q(4, 1.0);
    BeliefValuation v = mobius_q_to_m(sa, q);
    CHECK(v.is_vacuous());
  }

  SUBCASE("bayesian table round-trips") {
    BeliefValuation bay = BeliefValuation::bayesian(sa, {0.3, 0.7});
    BeliefValuation back = mobius_q_to_m(sa, dense_commonalities(bay));
    CHECK(mass_equal(back, bay));
  }

  SUBCASE("negative image yields a pseudo valuation summing to one") {
    // Conditioning a joint by its own marginal: bookkeeping mass goes
    // negative while the total stays one.
    BeliefValuation cond = mk_condition(joint_2x2(m), Scope::of(m, {"A"}));
    CHECK(cond.mass_sum() == doctest::Approx(1.0));
    bool has_negative = false;
    for (const auto& [set, mass] : cond.masses())
      has_negative = has_negative || mass < 0;
    CHECK(has_negative);
    BeliefValuation back =
        mobius_q_to_m(cond.scope(), dense_commonalities(cond));
    CHECK(mass_equal(back, cond));
  }
}

TEST_CASE("combination") {
  Model m = ab_model();
  Scope sa = Scope::of(m, {"A"});

  SUBCASE("vacuous is the identity element") {
    BeliefValuation bay = BeliefValuation::bayesian(sa, {0.3, 0.7});
    CHECK(mass_equal(combine(BeliefValuation::vacuous(sa), bay), bay));
  }

  SUBCASE("two simple supports on one frame") {
    Bitmask a0 = ConfigSet::of_labels(sa, {{"a0"}}).members();
    Bitmask a1 = ConfigSet::of_labels(sa, {{"a1"}}).members();
    Bitmask full = Bitmask::full(2);
    BeliefValuation b1 =
        BeliefValuation::from_masses(sa, {{a0, 0.5}, {full, 0.5}});
    BeliefValuation b2 =
        BeliefValuation::from_masses(sa, {{a1, 0.4}, {full, 0.6}});
    BeliefValuation r = combine(b1, b2);
    CHECK(r.mass_of(Bitmask(2)) == doctest::Approx(0.2));   // conflict
    CHECK(r.mass_of(a0) == doctest::Approx(0.3));
    CHECK(r.mass_of(a1) == doctest::Approx(0.2));
    CHECK(r.mass_of(full) == doctest::Approx(0.3));
    CHECK(r.mass_sum() == doctest::Approx(1.0));
  }

  SUBCASE("bayesian factors on disjoint scopes multiply") {
    Scope sb = Scope::of(m, {"B"});
    BeliefValuation pa = BeliefValuation::bayesian(sa, {0.3, 0.7});
    BeliefValuation pb = BeliefValuation::bayesian(sb, {0.6, 0.4});
    BeliefValuation r = combine(pa, pb);
    Scope sab = Scope::of(m, {"A", "B"});
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        Bitmask single(4);
        single.set(sab.encode({a, b}));
        double want = (a ? 0.7 : 0.3) * (b ? 0.4 : 0.6);
        CHECK(r.mass_of(single) == doctest::Approx(want));
      }
    }
  }
}

TEST_CASE("decombination") {
  Model m = ab_model();
  Scope sa = Scope::of(m, {"A"});
  Scope sab = Scope::of(m, {"A", "B"});

  SUBCASE("dividing by the vacuous valuation is the identity") {
    BeliefValuation bay = BeliefValuation::bayesian(sa, {0.3, 0.7});
    CHECK(mass_equal(decombine(bay, BeliefValuation::vacuous(sa)), bay));
  }

  SUBCASE("round-trip against combination") {
    Rng rng(17);
    for (int t = 0; t < 50; ++t) {
      BeliefValuation b1 = random_proper_valuation(sa, 2, 0.1, rng);
      BeliefValuation b2 = random_proper_valuation(sab, 3, 0.1, rng);
      BeliefValuation b12 = combine(b1, b2);
      BeliefValuation rest = decombine(b12, b2);
      CHECK(rest.mass_sum() == doctest::Approx(1.0));
      CHECK(mass_distance(combine(b2, rest), b12) < 1e-9);
    }
  }

  SUBCASE("bayesian decombination divides pointwise") {
    BeliefValuation b12 = joint_2x2(m);
    BeliefValuation b2 =
        BeliefValuation::bayesian(sab, {0.25, 0.25, 0.25, 0.25});
    BeliefValuation r = decombine(b12, b2);
    CHECK(r.mass_sum() == doctest::Approx(1.0));
    const double want[] = {0.1 / 0.25, 0.3 / 0.25, 0.2 / 0.25, 0.4 / 0.25};
    for (uint32_t i = 0; i < 4; ++i) {
      Bitmask single(4);
      single.set(i);
      CHECK(r.mass_of(single) == doctest::Approx(want[i]));
    }
    CHECK(mass_distance(combine(b2, r), b12) < 1e-9);
  }

  SUBCASE("vanishing divisor under nonzero dividend is an error") {
    BeliefValuation b2 = BeliefValuation::bayesian(sa, {1.0, 0.0});
    CHECK_THROWS_AS(decombine(BeliefValuation::vacuous(sa), b2),
                    DecombinationError);
  }

  SUBCASE("frames beyond the dense limit are rejected") {
    std::vector<Variable> many;
    for (int i = 0; i < 5; ++i)
      many.push_back(Variable{std::string("V") + std::to_string(i), {"0", "1"}});
    Model big(many);
    Scope s = Scope::full(big);  // 32 configurations
    CHECK_THROWS_AS(
        decombine(BeliefValuation::vacuous(s), BeliefValuation::vacuous(s)),
        DenseLimitError);
  }
}

TEST_CASE("marginalization and vacuous extension") {
  Model m = ab_model();
  Scope sa = Scope::of(m, {"A"});
  Scope sab = Scope::of(m, {"A", "B"});

  BeliefValuation joint = joint_2x2(m);
  CHECK(mass_equal(marginalize(joint, sab), joint));
  CHECK(marginalize(BeliefValuation::vacuous(sab), sa).is_vacuous());

  BeliefValuation pa = marginalize(joint, sa);
  Bitmask a0(2), a1(2);
  a0.set(0);
  a1.set(1);
  CHECK(pa.mass_of(a0) == doctest::Approx(0.4));
  CHECK(pa.mass_of(a1) == doctest::Approx(0.6));

  CHECK_THROWS_AS(marginalize(pa, Scope::of(m, {"B"})), ScopeError);

  BeliefValuation point = BeliefValuation::bayesian(sa, {1.0, 0.0});
  CHECK(mass_equal(vacuous_extend(point, sa), point));
  CHECK(vacuous_extend(BeliefValuation::vacuous(sa), sab).is_vacuous());

  BeliefValuation lifted = vacuous_extend(point, sab);
  Bitmask cylinder(4);
  cylinder.set(sab.encode({0, 0}));
  cylinder.set(sab.encode({0, 1}));
  CHECK(lifted.mass_of(cylinder) == doctest::Approx(1.0));
  CHECK(mass_equal(marginalize(lifted, sa), point));
}

TEST_CASE("mk-conditioning") {
  Model m = ab_model();
  Scope sa = Scope::of(m, {"A"});
  Scope sab = Scope::of(m, {"A", "B"});

  SUBCASE("conditioning on the full scope of a positive valuation") {
    Rng rng(3);
    BeliefValuation b = random_proper_valuation(sab, 3, 0.2, rng);
    CHECK(mk_condition(b, sab).is_vacuous());
  }

  SUBCASE("bayesian case is the conditional probability table") {
    BeliefValuation cond = mk_condition(joint_2x2(m), sa);
    const double want[] = {0.1 / 0.4, 0.3 / 0.4, 0.2 / 0.6, 0.4 / 0.6};
    for (uint32_t i = 0; i < 4; ++i) {
      Bitmask single(4);
      single.set(i);
      CHECK(cond.mass_of(single) == doctest::Approx(want[i]));
    }
    CHECK(cond.mass_of(Bitmask(4)) == doctest::Approx(-1.0));
    CHECK(cond.mass_sum() == doctest::Approx(1.0));
  }

  SUBCASE("conditional recombines with the marginal") {
    Rng rng(11);
    for (int t = 0; t < 25; ++t) {
      BeliefValuation b = random_proper_valuation(sab, 3, 0.1, rng);
      BeliefValuation recomposed =
          combine(mk_condition(b, sa), marginalize(b, sa));
      CHECK(mass_distance(recomposed, b) < 1e-9);
    }
  }
}

TEST_CASE("family conditionals") {
  Model m = abc_model();
  Scope sa = Scope::of(m, {"A"});
  Scope sb = Scope::of(m, {"B"});
  Scope sab = Scope::of(m, {"A", "B"});
  Scope sbc = Scope::of(m, {"B", "C"});

  // P(a,b,c) = P(a) P(b|a) P(c|b): A and C independent given B.
  std::vector<double> pa = {0.3, 0.7};
  double pb_a[2][2] = {{0.2, 0.8}, {0.6, 0.4}};
  double pc_b[2][2] = {{0.4, 0.6}, {0.9, 0.1}};
  Scope sabc = Scope::full(m);
  std::vector<double> table(8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        table[sabc.encode({a, b, c})] = pa[a] * pb_a[a][b] * pc_b[b][c];
  BeliefValuation bel = BeliefValuation::bayesian(sabc, table);

  SUBCASE("empty parent set returns the plain marginal") {
    CHECK(mass_equal(conditional(bel, sab, Scope::empty(m)),
                     marginalize(bel, sab)));
  }

  SUBCASE("chain conditional equals the probability table") {
    BeliefValuation cond = conditional(bel, sab, sa);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        Bitmask single(4);
        single.set(sab.encode({a, b}));
        CHECK(cond.mass_of(single) == doctest::Approx(pb_a[a][b]));
      }
  }

  SUBCASE("node conditionals recombine to the joint") {
    BeliefValuation product =
        combine(combine(conditional(bel, sab, sb), conditional(bel, sbc, sb)),
                marginalize(bel, sb));
    CHECK(mass_distance(product, bel) < 1e-9);
  }
}

TEST_CASE("divergence") {
  Model m = ab_model();
  Scope sa = Scope::of(m, {"A"});

  BeliefValuation b = BeliefValuation::bayesian(sa, {0.3, 0.7});
  CHECK(delta_divergence(b, b) == doctest::Approx(0.0));

  BeliefValuation u = BeliefValuation::bayesian(sa, {0.5, 0.5});
  double want = 0.3 * std::abs(std::log(0.3 / 0.5)) +
                0.7 * std::abs(std::log(0.7 / 0.5));
  CHECK(delta_divergence(u, b) == doctest::Approx(want));

  BeliefValuation point = BeliefValuation::bayesian(sa, {1.0, 0.0});
  CHECK(std::isinf(delta_divergence(point, b)));

  Scope sb = Scope::of(m, {"B"});
  CHECK_THROWS_AS(delta_divergence(BeliefValuation::vacuous(sb), b),
                  ScopeError);
}

TEST_CASE("evidence application") {
  Model m = ab_model();
  Scope sa = Scope::of(m, {"A"});
  Scope sab = Scope::of(m, {"A", "B"});
  BeliefValuation joint = joint_2x2(m);

  SUBCASE("vacuous evidence changes nothing") {
    EvidencePotential ev =
        EvidencePotential::simple(ConfigSet::full(sa), 0.0);
    CHECK(mass_equal(apply_evidence(joint, ev), joint));
  }

  SUBCASE("hard evidence conditions the distribution") {
    EvidencePotential ev =
        EvidencePotential::hard(ConfigSet::of_labels(sa, {{"a0"}}));
    BeliefValuation post = apply_evidence(joint, ev, /*normalize=*/true);
    // Filter-and-renormalize by hand: P(.|a0).
    Bitmask s00(4), s01(4);
    s00.set(sab.encode({0, 0}));
    s01.set(sab.encode({0, 1}));
    CHECK(post.mass_of(s00) == doctest::Approx(0.1 / 0.4));
    CHECK(post.mass_of(s01) == doctest::Approx(0.3 / 0.4));
  }

  SUBCASE("contradictory evidence concentrates on the empty set") {
    BeliefValuation zero_support = BeliefValuation::bayesian(sa, {1.0, 0.0});
    EvidencePotential ev =
        EvidencePotential::hard(ConfigSet::of_labels(sa, {{"a1"}}));
    BeliefValuation raw = apply_evidence(zero_support, ev);
    CHECK(raw.mass_of(Bitmask(2)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(apply_evidence(zero_support, ev, /*normalize=*/true),
                    NumericError);
  }

  SUBCASE("potential invariants") {
    EvidencePotential soft =
        EvidencePotential::simple(ConfigSet::of_labels(sa, {{"a0"}}), 0.8);
    CHECK(soft.valuation().is_proper());
    CHECK(soft.valuation().focal_count() == 2);
    CHECK_THROWS_AS(EvidencePotential::hard(ConfigSet::empty(sa)), DataError);
  }
}

TEST_CASE("pseudo factors propagate like proper ones") {
  Model m = abc_model();
  Scope sab = Scope::of(m, {"A", "B"});
  Scope sbc = Scope::of(m, {"B", "C"});
  Scope sb = Scope::of(m, {"B"});
  Rng rng(29);

  BeliefValuation f1 = random_proper_valuation(sab, 3, 0.2, rng);
  BeliefValuation f2 = random_proper_valuation(sbc, 3, 0.2, rng);
  BeliefValuation joint = combine(f1, f2);

  // Refactor through conditionals: pseudo factors representing the same
  // joint must produce the same marginals.
  BeliefValuation g1 = mk_condition(joint, sbc);  // pseudo
  BeliefValuation g2 = marginalize(joint, sbc);
  BeliefValuation rejoined = combine(g1, g2);
  CHECK(mass_distance(rejoined, joint) < 1e-9);
  CHECK(mass_distance(marginalize(rejoined, sab), marginalize(joint, sab)) <
        1e-9);
}

TEST_CASE("normalization is explicit and separate") {
  Model m = ab_model();
  Scope sa = Scope::of(m, {"A"});
  Bitmask a0(2), full = Bitmask::full(2);
  a0.set(0);
  BeliefValuation conflicted = BeliefValuation::from_masses(
      sa, {{Bitmask(2), 0.2}, {a0, 0.3}, {full, 0.5}});
  BeliefValuation n = normalize_conflict(conflicted);
  CHECK(n.mass_of(Bitmask(2)) == doctest::Approx(0.0));
  CHECK(n.mass_of(a0) == doctest::Approx(0.3 / 0.8));
  CHECK(n.mass_of(full) == doctest::Approx(0.5 / 0.8));
}
