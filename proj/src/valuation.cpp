#include "beltree/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>

namespace beltree {

namespace {

void check_same_scope(const Scope& a, const Scope& b, const char* op) {
  if (a != b)
    throw ScopeError(std::string(op) + ": operands must share one scope");
}

void prune(BeliefValuation::MassMap& m) {
  for (auto it = m.begin(); it != m.end();) {
    if (std::abs(it->second) < kMassPruneEps)
      it = m.erase(it);
    else
      ++it;
  }
}

}  // namespace

ConfigSet::ConfigSet(Scope scope, Bitmask members)
    : scope_(std::move(scope)), members_(std::move(members)) {
  if (members_.bit_size() != scope_.config_count())
    throw ScopeError("configuration-set mask does not match scope frame");
}

ConfigSet ConfigSet::of_values(const Scope& s,
                               const std::vector<std::vector<int>>& configs) {
  Bitmask m(s.config_count());
  for (const auto& c : configs) m.set(s.encode(c));
  return ConfigSet(s, std::move(m));
}

ConfigSet ConfigSet::of_labels(
    const Scope& s, const std::vector<std::vector<std::string>>& configs) {
  Bitmask m(s.config_count());
  for (const auto& c : configs) {
    if (static_cast<int>(c.size()) != s.size())
      throw DataError("configuration arity does not match scope");
    std::vector<int> values(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
      const auto& labels = s.model().var(s.vars()[i]).labels;
      auto it = std::find(labels.begin(), labels.end(), c[i]);
      if (it == labels.end())
        throw DataError("unknown label '" + c[i] + "' for variable '" +
                        s.model().var(s.vars()[i]).name + "'");
      values[i] = static_cast<int>(it - labels.begin());
    }
    m.set(s.encode(values));
  }
  return ConfigSet(s, std::move(m));
}

bool operator==(const ConfigSet& a, const ConfigSet& b) {
  return a.scope_ == b.scope_ && a.members_ == b.members_;
}

BeliefValuation::BeliefValuation(Scope scope, MassMap masses)
    : scope_(std::move(scope)), masses_(std::move(masses)) {
  if (scope_.is_empty())
    throw ScopeError("valuations require a nonempty scope");
  for (const auto& [set, mass] : masses_) {
    (void)mass;
    if (set.bit_size() != scope_.config_count())
      throw ScopeError("focal-set mask does not match scope frame");
  }
  prune(masses_);
}

BeliefValuation BeliefValuation::vacuous(const Scope& s) {
  MassMap m;
  m.emplace(Bitmask::full(s.config_count()), 1.0);
  return BeliefValuation(s, std::move(m));
}

BeliefValuation BeliefValuation::bayesian(const Scope& s,
                                          const std::vector<double>& probs) {
  if (probs.size() != s.config_count())
    throw DataError("probability table size does not match frame");
  MassMap m;
  for (uint32_t i = 0; i < probs.size(); ++i) {
    if (probs[i] == 0.0) continue;
    Bitmask b(s.config_count());
    b.set(i);
    m.emplace(std::move(b), probs[i]);
  }
  return BeliefValuation(s, std::move(m));
}

BeliefValuation BeliefValuation::from_masses(
    const Scope& s, const std::vector<std::pair<Bitmask, double>>& entries) {
  MassMap m;
  for (const auto& [set, mass] : entries) m[set] += mass;
  return BeliefValuation(s, std::move(m));
}

double BeliefValuation::mass_sum() const {
  double s = 0;
  for (const auto& [set, mass] : masses_) {
    (void)set;
    s += mass;
  }
  return s;
}

double BeliefValuation::mass_of(const Bitmask& set) const {
  auto it = masses_.find(set);
  return it == masses_.end() ? 0.0 : it->second;
}

double BeliefValuation::mass_of_empty() const {
  return mass_of(Bitmask(scope_.config_count()));
}

bool BeliefValuation::is_proper(double tol) const {
  if (!is_normalized(tol)) return false;
  for (const auto& [set, mass] : masses_) {
    if (mass < -tol) return false;
    if (set.none() && mass > tol) return false;
  }
  return true;
}

bool BeliefValuation::is_bayesian(double tol) const {
  if (!is_proper(tol)) return false;
  for (const auto& [set, mass] : masses_) {
    if (set.count() != 1 && std::abs(mass) > tol) return false;
  }
  return true;
}

bool BeliefValuation::is_vacuous(double tol) const {
  return std::abs(mass_of(Bitmask::full(scope_.config_count())) - 1.0) <= tol &&
         is_proper(tol);
}

bool BeliefValuation::is_normalized(double tol) const {
  return std::abs(mass_sum() - 1.0) <= tol;
}

EvidencePotential EvidencePotential::hard(const ConfigSet& observed) {
  if (observed.is_empty_set())
    throw DataError("hard evidence on an empty configuration set");
  BeliefValuation::MassMap m;
  m.emplace(observed.members(), 1.0);
  return EvidencePotential(BeliefValuation(observed.scope(), std::move(m)));
}

EvidencePotential EvidencePotential::simple(const ConfigSet& observed,
                                            double support) {
  if (observed.is_empty_set())
    throw DataError("evidence on an empty configuration set");
  if (support < 0.0 || support > 1.0)
    throw DataError("evidence support must lie in [0, 1]");
  BeliefValuation::MassMap m;
  m.emplace(observed.members(), support);
  m[Bitmask::full(observed.scope().config_count())] += 1.0 - support;
  return EvidencePotential(BeliefValuation(observed.scope(), std::move(m)));
}

// ---------------------------------------------------------------------------

double commonality_at(const BeliefValuation& bel, const ConfigSet& a) {
  check_same_scope(bel.scope(), a.scope(), "commonality_at");
  double q = 0;
  for (const auto& [set, mass] : bel.masses()) {
    if (a.members().subset_of(set)) q += mass;
  }
  return q;
}

BeliefValuation vacuous_extend(const BeliefValuation& b, const Scope& h) {
  if (h == b.scope()) return b;
  if (!h.contains(b.scope()))
    throw ScopeError("vacuous_extend: target does not contain scope");
  auto table = h.projection_to(b.scope());
  BeliefValuation::MassMap out;
  for (const auto& [set, mass] : b.masses()) {
    Bitmask big(h.config_count());
    for (uint32_t idx = 0; idx < table.size(); ++idx) {
      if (set.test(table[idx])) big.set(idx);
    }
    out[std::move(big)] += mass;
  }
  return BeliefValuation(h, std::move(out));
}

BeliefValuation marginalize(const BeliefValuation& b, const Scope& h) {
  if (h == b.scope()) return b;
  if (h.is_empty())
    throw ScopeError("marginalize: target scope must be nonempty");
  if (!b.scope().contains(h))
    throw ScopeError("marginalize: target is not a subscope");
  auto table = b.scope().projection_to(h);
  BeliefValuation::MassMap out;
  for (const auto& [set, mass] : b.masses()) {
    Bitmask small(h.config_count());
    set.for_each_set([&](uint32_t idx) { small.set(table[idx]); });
    out[std::move(small)] += mass;
  }
  return BeliefValuation(h, std::move(out));
}

BeliefValuation combine(const BeliefValuation& b1, const BeliefValuation& b2) {
  Scope u = b1.scope().set_union(b2.scope());
  std::optional<BeliefValuation> ext1, ext2;
  if (b1.scope() != u) ext1 = vacuous_extend(b1, u);
  if (b2.scope() != u) ext2 = vacuous_extend(b2, u);
  const BeliefValuation& e1 = ext1 ? *ext1 : b1;
  const BeliefValuation& e2 = ext2 ? *ext2 : b2;

  BeliefValuation::MassMap out;
  for (const auto& [s1, m1] : e1.masses()) {
    for (const auto& [s2, m2] : e2.masses()) {
      out[s1 & s2] += m1 * m2;
    }
  }
  return BeliefValuation(u, std::move(out));
}

BeliefValuation apply_evidence(const BeliefValuation& b,
                               const EvidencePotential& e, bool normalize) {
  BeliefValuation r = combine(b, e.valuation());
  return normalize ? normalize_conflict(r) : r;
}

BeliefValuation normalize_conflict(const BeliefValuation& b) {
  Bitmask empty(b.scope().config_count());
  double conflict = b.mass_of(empty);
  double keep = 1.0 - conflict;
  if (std::abs(keep) < kMassPruneEps)
    throw NumericError("normalization impossible: all mass in conflict");
  BeliefValuation::MassMap out;
  for (const auto& [set, mass] : b.masses()) {
    if (set.none()) continue;
    out.emplace(set, mass / keep);
  }
  return BeliefValuation(b.scope(), std::move(out));
}

// ---------------------------------------------------------------------------
// Dense subset-lattice machinery
// ---------------------------------------------------------------------------

uint32_t dense_limit() {
  static const uint32_t limit = [] {
    if (const char* env = std::getenv("BELTREE_DENSE_LIMIT")) {
      long v = std::strtol(env, nullptr, 10);
      if (v >= 1 && v <= 20) return static_cast<uint32_t>(v);
    }
    return uint32_t{16};
  }();
  return limit;
}

void require_dense(const Scope& s, const char* op) {
  if (s.config_count() > dense_limit())
    throw DenseLimitError(std::string(op) + ": frame of " +
                          std::to_string(s.config_count()) +
                          " configurations exceeds the dense limit of " +
                          std::to_string(dense_limit()));
}

void superset_zeta(std::vector<double>& f, uint32_t n_configs) {
  const size_t n = size_t{1} << n_configs;
  for (uint32_t i = 0; i < n_configs; ++i) {
    const size_t bit = size_t{1} << i;
    for (size_t mask = 0; mask < n; ++mask) {
      if (!(mask & bit)) f[mask] += f[mask | bit];
    }
  }
}

void superset_moebius(std::vector<double>& f, uint32_t n_configs) {
  const size_t n = size_t{1} << n_configs;
  for (uint32_t i = 0; i < n_configs; ++i) {
    const size_t bit = size_t{1} << i;
    for (size_t mask = 0; mask < n; ++mask) {
      if (!(mask & bit)) f[mask] -= f[mask | bit];
    }
  }
}

std::vector<double> dense_commonalities(const BeliefValuation& b) {
  require_dense(b.scope(), "dense_commonalities");
  const uint32_t cc = b.scope().config_count();
  std::vector<double> f(size_t{1} << cc, 0.0);
  for (const auto& [set, mass] : b.masses())
    f[static_cast<size_t>(set.low_word())] += mass;
  superset_zeta(f, cc);
  return f;
}

BeliefValuation mobius_q_to_m(const Scope& s, const std::vector<double>& q) {
  require_dense(s, "mobius_q_to_m");
  const uint32_t cc = s.config_count();
  if (q.size() != (size_t{1} << cc))
    throw DataError("commonality table size does not match subset lattice");
  std::vector<double> f = q;
  superset_moebius(f, cc);
  double sum = 0;
  for (double v : f) sum += v;
  if (std::abs(sum) < kMassPruneEps)
    throw NumericError("mobius_q_to_m: masses sum to zero, cannot normalize");
  BeliefValuation::MassMap out;
  for (size_t mask = 0; mask < f.size(); ++mask) {
    double m = f[mask] / sum;
    if (std::abs(m) < kMassPruneEps) continue;
    out.emplace(Bitmask::from_word(cc, static_cast<uint64_t>(mask)), m);
  }
  return BeliefValuation(s, std::move(out));
}

BeliefValuation decombine(const BeliefValuation& b12,
                          const BeliefValuation& b2) {
  Scope u = b12.scope().set_union(b2.scope());
  require_dense(u, "decombine");
  const BeliefValuation e12 = b12.scope() == u ? b12 : vacuous_extend(b12, u);
  const BeliefValuation e2 = b2.scope() == u ? b2 : vacuous_extend(b2, u);

  std::vector<double> q12 = dense_commonalities(e12);
  std::vector<double> q2 = dense_commonalities(e2);
  std::vector<double> q(q12.size(), 0.0);
  for (size_t mask = 0; mask < q.size(); ++mask) {
    if (std::abs(q2[mask]) < kMassPruneEps) {
      if (std::abs(q12[mask]) >= kMassPruneEps)
        throw DecombinationError(
            "decombine: divisor commonality vanishes where the dividend does "
            "not (subset index " +
            std::to_string(mask) + ")");
      q[mask] = 0.0;  // 0/0 convention: outside the support, carries no mass
    } else {
      q[mask] = q12[mask] / q2[mask];
    }
  }
  return mobius_q_to_m(u, q);
}

BeliefValuation mk_condition(const BeliefValuation& b, const Scope& h) {
  if (!b.scope().contains(h))
    throw ScopeError("mk_condition: conditioning set is not a subscope");
  if (h.is_empty()) return b;  // decombination by the neutral valuation
  return decombine(b, marginalize(b, h));
}

BeliefValuation conditional(const BeliefValuation& bel, const Scope& h,
                            const Scope& g) {
  if (!h.contains(g))
    throw ScopeError("conditional: parent set must lie inside the family");
  BeliefValuation fam = marginalize(bel, h);
  if (g.is_empty()) return fam;
  return mk_condition(fam, g);
}

double delta_divergence(const BeliefValuation& approx,
                        const BeliefValuation& reference) {
  check_same_scope(approx.scope(), reference.scope(), "delta_divergence");
  if (!reference.is_proper(1e-6))
    throw DataError("delta_divergence: reference must be a proper valuation");
  double total = 0;
  for (const auto& [set, mass] : reference.masses()) {
    if (mass <= 0) continue;
    ConfigSet a(reference.scope(), set);
    double q1 = commonality_at(reference, a);
    double q2 = commonality_at(approx, a);
    if (q2 <= 0.0) return std::numeric_limits<double>::infinity();
    total += mass * std::abs(std::log(q1 / q2));
  }
  return total;
}

double mass_distance(const BeliefValuation& a, const BeliefValuation& b) {
  check_same_scope(a.scope(), b.scope(), "mass_distance");
  double worst = 0;
  for (const auto& [set, mass] : a.masses())
    worst = std::max(worst, std::abs(mass - b.mass_of(set)));
  for (const auto& [set, mass] : b.masses())
    worst = std::max(worst, std::abs(mass - a.mass_of(set)));
  return worst;
}

double total_variation(const BeliefValuation& a, const BeliefValuation& b) {
  check_same_scope(a.scope(), b.scope(), "total_variation");
  double sum = 0;
  for (const auto& [set, mass] : a.masses())
    sum += std::abs(mass - b.mass_of(set));
  for (const auto& [set, mass] : b.masses()) {
    if (a.masses().count(set) == 0) sum += std::abs(mass);
  }
  return sum / 2.0;
}

}  // namespace beltree
