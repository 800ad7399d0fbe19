#include "beltree/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace beltree::io {

namespace {

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw DataError(std::string(what) + ": array expected");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw DataError(std::string(what) + ": string expected");
    out.push_back(e.get<std::string>());
  }
  return out;
}

// A configuration listed as one label per variable of `listed`, where
// `listed` may permute the canonical scope order.
uint32_t encode_listed(const Scope& canonical, const std::vector<int>& listed,
                       const json& config) {
  if (!config.is_array() || config.size() != listed.size())
    throw DataError("configuration arity does not match scope");
  std::vector<int> values(listed.size(), -1);
  for (size_t i = 0; i < listed.size(); ++i) {
    int var = listed[i];
    const auto& labels = canonical.model().var(var).labels;
    const std::string label = config[i].get<std::string>();
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
      throw DataError("unknown label '" + label + "' for variable '" +
                      canonical.model().var(var).name + "'");
    // Position of var within the canonical scope.
    const auto& vars = canonical.vars();
    size_t pos = std::lower_bound(vars.begin(), vars.end(), var) - vars.begin();
    values[pos] = static_cast<int>(it - labels.begin());
  }
  return canonical.encode(values);
}

json set_to_json(const Scope& scope, const Bitmask& set) {
  json arr = json::array();
  set.for_each_set([&](uint32_t idx) {
    auto values = scope.decode(idx);
    json config = json::array();
    for (size_t i = 0; i < values.size(); ++i)
      config.push_back(scope.model().var(scope.vars()[i]).labels[values[i]]);
    arr.push_back(std::move(config));
  });
  return arr;
}

}  // namespace

json model_to_json(const Model& m) {
  json vars = json::array();
  for (int i = 0; i < m.size(); ++i) {
    vars.push_back({{"name", m.var(i).name}, {"values", m.var(i).labels}});
  }
  return {{"variables", std::move(vars)}};
}

Model model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("variables"))
    throw DataError("model: 'variables' missing");
  std::vector<Variable> vars;
  for (const auto& vj : j.at("variables")) {
    Variable v;
    v.name = vj.at("name").get<std::string>();
    v.labels = string_list(vj.at("values"), "variable values");
    vars.push_back(std::move(v));
  }
  return Model(std::move(vars));
}

json valuation_to_json(const BeliefValuation& v) {
  json masses = json::array();
  for (const auto& [set, mass] : v.masses()) {
    masses.push_back({{"set", set_to_json(v.scope(), set)}, {"mass", mass}});
  }
  return {{"scope", v.scope().var_names()}, {"masses", std::move(masses)}};
}

BeliefValuation valuation_from_json(const json& j, const Model& m) {
  if (!j.is_object() || !j.contains("scope") || !j.contains("masses"))
    throw DataError("valuation: 'scope' and 'masses' required");
  std::vector<int> listed;
  for (const auto& name : string_list(j.at("scope"), "scope"))
    listed.push_back(m.require(name));
  Scope scope(m, listed);
  if (scope.size() != static_cast<int>(listed.size()))
    throw DataError("valuation: duplicate scope variable");

  BeliefValuation::MassMap masses;
  double sum = 0;
  for (const auto& entry : j.at("masses")) {
    Bitmask set(scope.config_count());
    for (const auto& config : entry.at("set"))
      set.set(encode_listed(scope, listed, config));
    double mass = entry.at("mass").get<double>();
    sum += mass;
    masses[std::move(set)] += mass;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw DataError("valuation: masses sum to " + std::to_string(sum) +
                    ", expected 1");
  return BeliefValuation(scope, std::move(masses));
}

json hypergraph_to_json(const Hypergraph& h) {
  json edges = json::array();
  for (const auto& e : h.edges()) edges.push_back(e.var_names());
  return {{"vertices", h.vertices().var_names()},
          {"hyperedges", std::move(edges)}};
}

Hypergraph hypergraph_from_json(const json& j, const Model& m) {
  if (!j.is_object() || !j.contains("hyperedges"))
    throw DataError("hypergraph: 'hyperedges' missing");
  std::vector<Scope> edges;
  for (const auto& ej : j.at("hyperedges"))
    edges.push_back(Scope::of(m, string_list(ej, "hyperedge")));
  if (j.contains("vertices")) {
    Scope verts = Scope::of(m, string_list(j.at("vertices"), "vertices"));
    return Hypergraph(verts, std::move(edges));
  }
  return Hypergraph::over(m, std::move(edges));
}

json network_to_json(const BeliefNetwork& n) {
  json nodes = json::array();
  for (int v = 0; v < n.dag.size(); ++v) {
    std::vector<std::string> parents;
    for (int p : n.dag.parents[v]) parents.push_back(n.dag.model.var(p).name);
    nodes.push_back({{"var", n.dag.model.var(v).name},
                     {"parents", parents},
                     {"valuation", valuation_to_json(n.node_valuations[v])}});
  }
  return {{"nodes", std::move(nodes)}};
}

BeliefNetwork network_from_json(const json& j, const Model& m) {
  if (!j.is_object() || !j.contains("nodes"))
    throw DataError("network: 'nodes' missing");
  std::vector<std::vector<int>> parents(m.size());
  std::vector<std::optional<BeliefValuation>> vals(m.size());
  for (const auto& nj : j.at("nodes")) {
    int v = m.require(nj.at("var").get<std::string>());
    std::vector<int> par;
    for (const auto& name : string_list(nj.at("parents"), "parents"))
      par.push_back(m.require(name));
    std::sort(par.begin(), par.end());
    parents[v] = std::move(par);
    vals[v] = valuation_from_json(nj.at("valuation"), m);
  }
  BeliefNetwork net{DagStructure{m, std::move(parents)}, {}};
  for (int v = 0; v < m.size(); ++v) {
    if (!vals[v])
      throw DataError("network: node '" + m.var(v).name + "' missing");
    Scope fam = net.dag.family(v);
    if (!(vals[v]->scope() == fam))
      throw DataError("network: valuation scope of '" + m.var(v).name +
                      "' is not its family");
    net.node_valuations.push_back(std::move(*vals[v]));
  }
  if (!net.dag.is_acyclic()) throw DataError("network: graph has a cycle");
  return net;
}

ModelDocument document_from_json(const json& j) {
  if (!j.is_object() || !j.contains("model"))
    throw DataError("document: 'model' section missing");
  ModelDocument doc;
  doc.model = model_from_json(j.at("model"));
  if (j.contains("hyperedges"))
    doc.hypergraph = hypergraph_from_json(
        json{{"hyperedges", j.at("hyperedges")}}, doc.model);
  if (j.contains("factors")) {
    for (const auto& fj : j.at("factors"))
      doc.factors.push_back(valuation_from_json(fj, doc.model));
  }
  if (j.contains("joint"))
    doc.joint = valuation_from_json(j.at("joint"), doc.model);
  else if (j.contains("valuation"))
    doc.joint = valuation_from_json(j.at("valuation"), doc.model);
  if (j.contains("nodes")) doc.network = network_from_json(j, doc.model);
  if (j.contains("tree")) {
    for (const auto& ej : j.at("tree").at("edges")) {
      auto pair = string_list(ej, "tree edge");
      if (pair.size() != 2) throw DataError("tree edge must name two variables");
      doc.tree_edges.emplace_back(doc.model.require(pair[0]),
                                  doc.model.require(pair[1]));
    }
  }
  return doc;
}

void write_dataset(std::ostream& os, const SampleDataset& data) {
  json header = {{"model", model_to_json(data.scope.model())}};
  os << header.dump() << "\n";
  for (const auto& rec : data.records)
    os << set_to_json(data.scope, rec).dump() << "\n";
}

SampleDataset read_dataset(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("dataset: empty stream");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.contains("model"))
    throw DataError("dataset: first line must carry the model header");
  Model m = model_from_json(header.at("model"));
  Scope full = Scope::full(m);

  SampleDataset data{full, {}};
  std::vector<int> listed(m.size());
  for (int i = 0; i < m.size(); ++i) listed[i] = i;
  size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_array())
      throw DataError("dataset: bad record on line " + std::to_string(line_no));
    Bitmask set(full.config_count());
    for (const auto& config : rec) set.set(encode_listed(full, listed, config));
    if (set.none())
      throw DataError("dataset: empty record on line " + std::to_string(line_no));
    data.records.push_back(std::move(set));
  }
  if (data.records.empty()) throw DataError("dataset: no records");
  return data;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw DataError("malformed JSON in '" + path + "'");
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace beltree::io
