#include "beltree/model.hpp"

#include <algorithm>
#include <set>

namespace beltree {

namespace {
// Frames above this cannot be materialized as configuration masks at all.
constexpr uint64_t kMaxFrameConfigs = uint64_t{1} << 20;
}  // namespace

Model::Model(std::vector<Variable> vars) {
  if (vars.empty()) throw DataError("model must declare at least one variable");
  auto index = std::make_shared<std::map<std::string, int>>();
  for (size_t i = 0; i < vars.size(); ++i) {
    const Variable& v = vars[i];
    if (v.name.empty()) throw DataError("variable with empty name");
    if (v.labels.empty())
      throw DataError("variable '" + v.name + "' has an empty domain");
    std::set<std::string> seen(v.labels.begin(), v.labels.end());
    if (seen.size() != v.labels.size())
      throw DataError("variable '" + v.name + "' has duplicate domain labels");
    if (!index->emplace(v.name, static_cast<int>(i)).second)
      throw DataError("duplicate variable name '" + v.name + "'");
  }
  vars_ = std::make_shared<const std::vector<Variable>>(std::move(vars));
  index_ = std::move(index);
}

int Model::index_of(const std::string& name) const {
  auto it = index_->find(name);
  return it == index_->end() ? -1 : it->second;
}

int Model::require(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) throw DataError("unknown variable '" + name + "'");
  return i;
}

bool Model::operator==(const Model& o) const {
  if (vars_ == o.vars_) return true;
  if (!vars_ || !o.vars_) return false;
  return *vars_ == *o.vars_;
}

Scope::Scope(Model model, std::vector<int> vars) : model_(std::move(model)) {
  if (!model_.valid()) throw DataError("scope over an empty model");
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  for (int v : vars) {
    if (v < 0 || v >= model_.size())
      throw ScopeError("variable index out of range");
  }
  vars_ = std::move(vars);
  uint64_t count = 1;
  for (int v : vars_) {
    count *= model_.var(v).labels.size();
    if (count > kMaxFrameConfigs)
      throw DataError("configuration space too large to materialize");
  }
  config_count_ = static_cast<uint32_t>(count);
}

Scope Scope::full(const Model& m) {
  std::vector<int> all(m.size());
  for (int i = 0; i < m.size(); ++i) all[i] = i;
  return Scope(m, std::move(all));
}

Scope Scope::of(const Model& m, const std::vector<std::string>& names) {
  std::vector<int> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(m.require(n));
  return Scope(m, std::move(idx));
}

bool Scope::contains_var(int var) const {
  return std::binary_search(vars_.begin(), vars_.end(), var);
}

bool Scope::contains(const Scope& o) const {
  if (!(model_ == o.model_)) throw ScopeError("scopes over different models");
  return std::includes(vars_.begin(), vars_.end(), o.vars_.begin(),
                       o.vars_.end());
}

Scope Scope::set_union(const Scope& o) const {
  if (!(model_ == o.model_)) throw ScopeError("scopes over different models");
  std::vector<int> out;
  std::set_union(vars_.begin(), vars_.end(), o.vars_.begin(), o.vars_.end(),
                 std::back_inserter(out));
  return Scope(model_, std::move(out));
}

Scope Scope::set_intersect(const Scope& o) const {
  if (!(model_ == o.model_)) throw ScopeError("scopes over different models");
  std::vector<int> out;
  std::set_intersection(vars_.begin(), vars_.end(), o.vars_.begin(),
                        o.vars_.end(), std::back_inserter(out));
  return Scope(model_, std::move(out));
}

Scope Scope::set_difference(const Scope& o) const {
  if (!(model_ == o.model_)) throw ScopeError("scopes over different models");
  std::vector<int> out;
  std::set_difference(vars_.begin(), vars_.end(), o.vars_.begin(),
                      o.vars_.end(), std::back_inserter(out));
  return Scope(model_, std::move(out));
}

uint32_t Scope::encode(const std::vector<int>& values) const {
  if (values.size() != vars_.size())
    throw ScopeError("configuration arity does not match scope");
  uint32_t idx = 0;
  for (size_t i = 0; i < vars_.size(); ++i) {
    int d = domain_size(static_cast<int>(i));
    if (values[i] < 0 || values[i] >= d)
      throw DataError("configuration value out of domain range");
    idx = idx * d + static_cast<uint32_t>(values[i]);
  }
  return idx;
}

std::vector<int> Scope::decode(uint32_t index) const {
  std::vector<int> values(vars_.size(), 0);
  for (size_t i = vars_.size(); i-- > 0;) {
    int d = domain_size(static_cast<int>(i));
    values[i] = static_cast<int>(index % d);
    index /= d;
  }
  return values;
}

std::vector<uint32_t> Scope::projection_to(const Scope& sub) const {
  if (!contains(sub)) throw ScopeError("projection target is not a subscope");
  // Position of each sub variable within this scope, plus sub strides.
  std::vector<int> pos(sub.vars_.size());
  for (size_t j = 0; j < sub.vars_.size(); ++j) {
    pos[j] = static_cast<int>(
        std::lower_bound(vars_.begin(), vars_.end(), sub.vars_[j]) -
        vars_.begin());
  }
  std::vector<uint32_t> stride(sub.vars_.size(), 1);
  for (size_t j = sub.vars_.size(); j-- > 1;)
    stride[j - 1] = stride[j] * sub.domain_size(static_cast<int>(j));

  std::vector<uint32_t> table(config_count_);
  std::vector<int> digits(vars_.size(), 0);
  for (uint32_t idx = 0; idx < config_count_; ++idx) {
    uint32_t s = 0;
    for (size_t j = 0; j < pos.size(); ++j)
      s += static_cast<uint32_t>(digits[pos[j]]) * stride[j];
    table[idx] = s;
    for (size_t d = vars_.size(); d-- > 0;) {
      if (++digits[d] < domain_size(static_cast<int>(d))) break;
      digits[d] = 0;
    }
  }
  return table;
}

std::vector<std::string> Scope::var_names() const {
  std::vector<std::string> names;
  names.reserve(vars_.size());
  for (int v : vars_) names.push_back(model_.var(v).name);
  return names;
}

}  // namespace beltree
