#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "beltree/errors.hpp"

namespace beltree {

struct Variable {
  std::string name;
  std::vector<std::string> labels;  // ordered, distinct, at least one

  friend bool operator==(const Variable&, const Variable&) = default;
};

// Immutable, shared variable universe. Variable order is fixed at construction
// and defines the canonical enumeration order everywhere else.
class Model {
 public:
  Model() = default;
  explicit Model(std::vector<Variable> vars);

  bool valid() const { return vars_ != nullptr; }
  int size() const { return static_cast<int>(vars_->size()); }
  const Variable& var(int i) const { return (*vars_)[i]; }

  // -1 when absent.
  int index_of(const std::string& name) const;
  // Throws DataError when absent.
  int require(const std::string& name) const;

  bool operator==(const Model& o) const;

 private:
  std::shared_ptr<const std::vector<Variable>> vars_;
  std::shared_ptr<const std::map<std::string, int>> index_;
};

// A canonically ordered subset of model variables. The configuration space of
// a scope is the cross product of its variable domains, enumerated with the
// last scope variable varying fastest.
class Scope {
 public:
  Scope() = default;
  Scope(Model model, std::vector<int> vars);

  static Scope full(const Model& m);
  static Scope empty(const Model& m) { return Scope(m, {}); }
  static Scope of(const Model& m, const std::vector<std::string>& names);
  static Scope single(const Model& m, int var) { return Scope(m, {var}); }

  const Model& model() const { return model_; }
  const std::vector<int>& vars() const& { return vars_; }
  std::vector<int> vars() && { return std::move(vars_); }
  int size() const { return static_cast<int>(vars_.size()); }
  bool is_empty() const { return vars_.empty(); }

  uint32_t config_count() const { return config_count_; }
  int domain_size(int pos) const {
    return static_cast<int>(model_.var(vars_[pos]).labels.size());
  }
  bool contains_var(int var) const;
  bool contains(const Scope& o) const;

  Scope set_union(const Scope& o) const;
  Scope set_intersect(const Scope& o) const;
  Scope set_difference(const Scope& o) const;

  // Configuration codec: values are per-position label indices.
  uint32_t encode(const std::vector<int>& values) const;
  std::vector<int> decode(uint32_t index) const;

  // For sub a subscope of this: maps every configuration index of this scope
  // to the index of its restriction in sub. One table serves both projection
  // and cylindrical extension of configuration sets.
  std::vector<uint32_t> projection_to(const Scope& sub) const;

  std::vector<std::string> var_names() const;

  bool operator==(const Scope& o) const {
    return model_ == o.model_ && vars_ == o.vars_;
  }
  bool operator!=(const Scope& o) const { return !(*this == o); }
  // Lexicographic on variable indices; deterministic container ordering.
  bool operator<(const Scope& o) const { return vars_ < o.vars_; }

 private:
  Model model_;
  std::vector<int> vars_;        // sorted model indices, no duplicates
  uint32_t config_count_ = 1;
};

}  // namespace beltree
