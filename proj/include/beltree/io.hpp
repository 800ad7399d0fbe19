#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "beltree/dataset.hpp"
#include "beltree/generator.hpp"
#include "beltree/hypergraph.hpp"
#include "beltree/network.hpp"
#include "beltree/valuation.hpp"

namespace beltree::io {

using nlohmann::json;

json model_to_json(const Model& m);
Model model_from_json(const json& j);

// {"scope":["A","B"],"masses":[{"set":[["a0","b0"],...],"mass":0.5},...]}
// Configurations are label tuples following the listed scope order; masses
// must sum to 1 within 1e-6.
json valuation_to_json(const BeliefValuation& v);
BeliefValuation valuation_from_json(const json& j, const Model& m);

// {"vertices":["A",...],"hyperedges":[["A","B","C"],...]}
json hypergraph_to_json(const Hypergraph& h);
Hypergraph hypergraph_from_json(const json& j, const Model& m);

// {"nodes":[{"var":"B","parents":["C"],"valuation":{...}},...]}
json network_to_json(const BeliefNetwork& n);
BeliefNetwork network_from_json(const json& j, const Model& m);

// A self-describing document: the model plus whichever sections are present.
struct ModelDocument {
  Model model;
  std::optional<Hypergraph> hypergraph;
  std::vector<BeliefValuation> factors;
  std::optional<BeliefValuation> joint;
  std::optional<BeliefNetwork> network;
  std::vector<std::pair<int, int>> tree_edges;  // generator provenance
};

ModelDocument document_from_json(const json& j);

// One JSON header line carrying the model, then one focal set per line as a
// list of configurations over the full variable set.
void write_dataset(std::ostream& os, const SampleDataset& data);
SampleDataset read_dataset(std::istream& is);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace beltree::io
