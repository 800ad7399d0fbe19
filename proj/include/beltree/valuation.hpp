#pragma once

#include <map>
#include <string>
#include <vector>

#include "beltree/bitmask.hpp"
#include "beltree/model.hpp"

namespace beltree {

// Focal elements whose absolute mass falls below this are dropped after each
// operation; combination inflates focal counts multiplicatively otherwise.
inline constexpr double kMassPruneEps = 1e-12;

// Default equality tolerance for mass-wise comparisons.
inline constexpr double kMassTol = 1e-9;

// A set of configurations on a scope, encoded as a membership mask over the
// scope's enumerated configuration space.
class ConfigSet {
 public:
  ConfigSet(Scope scope, Bitmask members);

  static ConfigSet empty(const Scope& s) {
    return ConfigSet(s, Bitmask(s.config_count()));
  }
  static ConfigSet full(const Scope& s) {
    return ConfigSet(s, Bitmask::full(s.config_count()));
  }
  // Each configuration is one label index per scope variable, in scope order.
  static ConfigSet of_values(const Scope& s,
                             const std::vector<std::vector<int>>& configs);
  static ConfigSet of_labels(const Scope& s,
                             const std::vector<std::vector<std::string>>& configs);

  const Scope& scope() const { return scope_; }
  const Bitmask& members() const { return members_; }
  uint32_t size() const { return members_.count(); }
  bool is_empty_set() const { return members_.none(); }

  friend bool operator==(const ConfigSet&, const ConfigSet&);

 private:
  Scope scope_;
  Bitmask members_;
};

// A mass assignment over configuration sets of one scope. Masses always sum
// to 1 within tolerance; proper belief functions are additionally nonnegative
// with no mass on the empty set, while pseudo-belief functions may carry
// negative masses (they arise from decombination and stay closed under it).
class BeliefValuation {
 public:
  using MassMap = std::map<Bitmask, double>;

  BeliefValuation(Scope scope, MassMap masses);

  static BeliefValuation vacuous(const Scope& s);
  // All mass on singletons, listed by configuration index.
  static BeliefValuation bayesian(const Scope& s,
                                  const std::vector<double>& probs);
  static BeliefValuation from_masses(
      const Scope& s, const std::vector<std::pair<Bitmask, double>>& entries);

  const Scope& scope() const { return scope_; }
  const MassMap& masses() const { return masses_; }
  size_t focal_count() const { return masses_.size(); }

  double mass_sum() const;
  double mass_of(const Bitmask& set) const;
  double mass_of_empty() const;

  bool is_proper(double tol = kMassTol) const;
  bool is_bayesian(double tol = kMassTol) const;
  bool is_vacuous(double tol = kMassTol) const;
  bool is_normalized(double tol = kMassTol) const;

 private:
  Scope scope_;
  MassMap masses_;
};

// Indicator / simple-support potential carrying observed evidence: all mass on
// the observed subset, or split between the subset and the full frame.
class EvidencePotential {
 public:
  static EvidencePotential hard(const ConfigSet& observed);
  static EvidencePotential simple(const ConfigSet& observed, double support);

  const Scope& scope() const { return valuation_.scope(); }
  const BeliefValuation& valuation() const { return valuation_; }

 private:
  explicit EvidencePotential(BeliefValuation v) : valuation_(std::move(v)) {}
  BeliefValuation valuation_;
};

// ---------------------------------------------------------------------------
// Valuation algebra
// ---------------------------------------------------------------------------

// Q(A) = sum of masses of focal elements containing A.
double commonality_at(const BeliefValuation& bel, const ConfigSet& a);

// Conjunctive (unnormalized) combination; operands are vacuously extended to
// the union scope first and conflict mass stays on the empty set, which keeps
// the operation exactly commutative and associative.
BeliefValuation combine(const BeliefValuation& b1, const BeliefValuation& b2);

// Inverse of combine: returns b with combine(b2, b) = b12 wherever defined.
// Computed as a dense commonality quotient (0/0 -> 0) scaled so masses sum to
// one, then Moebius-inverted; the result may be a pseudo-belief function.
BeliefValuation decombine(const BeliefValuation& b12,
                          const BeliefValuation& b2);

BeliefValuation marginalize(const BeliefValuation& b, const Scope& h);
BeliefValuation vacuous_extend(const BeliefValuation& b, const Scope& h);

// Decombination of a valuation by its own marginal on h; in the Bayesian case
// this is exactly the conditional probability table of (scope - h) given h.
BeliefValuation mk_condition(const BeliefValuation& b, const Scope& h);

// mk_condition(marginalize(bel, h), g); only the marginal on h is consulted.
// With g empty this is just the marginal on h.
BeliefValuation conditional(const BeliefValuation& bel, const Scope& h,
                            const Scope& g);

// Reference-mass-weighted absolute log-ratio of commonalities. reference must
// be a proper belief function; returns +infinity when the approximation has a
// non-positive commonality at a focal element of the reference.
double delta_divergence(const BeliefValuation& approx,
                        const BeliefValuation& reference);

BeliefValuation apply_evidence(const BeliefValuation& b,
                               const EvidencePotential& e,
                               bool normalize = false);

// Removes mass on the empty set and rescales the rest to sum to one.
BeliefValuation normalize_conflict(const BeliefValuation& b);

// ---------------------------------------------------------------------------
// Dense subset-lattice machinery (frames of at most dense_limit() configs)
// ---------------------------------------------------------------------------

// Maximum configuration count for dense subset-lattice work. Defaults to 16
// (65536 subsets); the BELTREE_DENSE_LIMIT environment variable overrides it.
uint32_t dense_limit();

void require_dense(const Scope& s, const char* op);

// In-place superset-sum transform and its inverse over arrays indexed by
// subset masks of an n-configuration frame.
void superset_zeta(std::vector<double>& f, uint32_t n_configs);
void superset_moebius(std::vector<double>& f, uint32_t n_configs);

// Dense commonality table of b over every subset of its frame.
std::vector<double> dense_commonalities(const BeliefValuation& b);

// Inverse Moebius transform of a dense commonality table; masses are scaled
// to sum to one afterwards.
BeliefValuation mobius_q_to_m(const Scope& s, const std::vector<double>& q);

// ---------------------------------------------------------------------------
// Comparisons
// ---------------------------------------------------------------------------

// Largest absolute difference between the two mass assignments (same scope).
double mass_distance(const BeliefValuation& a, const BeliefValuation& b);

inline bool mass_equal(const BeliefValuation& a, const BeliefValuation& b,
                       double tol = kMassTol) {
  return mass_distance(a, b) <= tol;
}

// Total variation distance between two proper valuations on one scope.
double total_variation(const BeliefValuation& a, const BeliefValuation& b);

}  // namespace beltree
