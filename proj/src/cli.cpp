#include "beltree/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "beltree/experiments.hpp"
#include "beltree/io.hpp"
#include "beltree/learning.hpp"

namespace beltree::cli {

namespace {

using nlohmann::json;

std::string format_scalar(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

json tree_edges_json(const Model& m,
                     const std::vector<std::pair<int, int>>& edges) {
  json arr = json::array();
  for (auto [c, p] : edges)
    arr.push_back({m.var(c).name, m.var(p).name});
  return arr;
}

// VAR=value for hard evidence, VAR=v1|v2@0.8 for simple support.
EvidencePotential parse_evidence(const Model& m, const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw UsageError("evidence must look like VAR=value or VAR=v1|v2@0.8");
  std::string var = spec.substr(0, eq);
  std::string rest = spec.substr(eq + 1);
  double support = 1.0;
  auto at = rest.find('@');
  if (at != std::string::npos) {
    try {
      support = std::stod(rest.substr(at + 1));
    } catch (const std::exception&) {
      throw UsageError("bad support level in evidence: " + spec);
    }
    rest = rest.substr(0, at);
  }
  std::vector<std::vector<std::string>> configs;
  std::stringstream ss(rest);
  std::string label;
  while (std::getline(ss, label, '|')) configs.push_back({label});
  if (configs.empty()) throw UsageError("evidence without a value: " + spec);

  Scope sv(m, {m.require(var)});
  ConfigSet observed = ConfigSet::of_labels(sv, configs);
  return at == std::string::npos ? EvidencePotential::hard(observed)
                                 : EvidencePotential::simple(observed, support);
}

// Hypertree from a model document: factors either ride their own hyperedges,
// or get reassigned onto a covering hypertree when the declared hypergraph
// does not order.
MarkovTree tree_from_document(const io::ModelDocument& doc) {
  if (doc.factors.empty())
    throw DataError("model document carries no factors to propagate over");
  std::vector<Scope> edges;
  if (doc.hypergraph) {
    edges = doc.hypergraph->edges();
  } else {
    for (const auto& f : doc.factors) edges.push_back(f.scope());
  }
  Hypergraph hg = reduce(Hypergraph::over(doc.model, edges));
  auto seq = construction_sequence(hg);
  if (!seq) seq = hypertree_cover(hg);

  std::vector<BeliefValuation> factors;
  factors.reserve(seq->size());
  for (int k = 0; k < seq->size(); ++k)
    factors.push_back(BeliefValuation::vacuous(seq->edges[k]));
  for (const auto& f : doc.factors) {
    int home = -1;
    for (int k = 0; k < seq->size(); ++k) {
      if (seq->edges[k].contains(f.scope())) {
        home = k;
        break;
      }
    }
    if (home < 0)
      throw DataError("factor scope not covered by the propagation tree");
    factors[home] = combine(factors[home], f);
  }
  return build_markov_tree(*seq, std::move(factors));
}

json suite_json(const experiments::SuiteResult& r) {
  return {{"suite", r.name},
          {"trials", r.trials},
          {"failures", r.failures},
          {"pass", r.pass()},
          {"notes", r.notes}};
}

int run_generate(int vars, int domain, int focal, double q_min, bool bayesian,
                 uint64_t seed, const std::string& out_model,
                 const std::string& out_joint, std::ostream& out) {
  GeneratorConfig cfg;
  cfg.var_count = vars;
  cfg.domain_size = domain;
  cfg.focal_per_factor = focal;
  cfg.q_min = q_min;
  cfg.bayesian = bayesian;
  cfg.seed = seed;
  GeneratedTree gen = generate_tree_distribution(cfg);

  json model_doc;
  model_doc["model"] = io::model_to_json(gen.model);
  json hyperedges = json::array();
  for (const auto& e : gen.sequence.edges) hyperedges.push_back(e.var_names());
  model_doc["hyperedges"] = std::move(hyperedges);
  json factors = json::array();
  for (const auto& f : gen.factors) factors.push_back(io::valuation_to_json(f));
  model_doc["factors"] = std::move(factors);
  model_doc["tree"] = {{"edges", tree_edges_json(gen.model, gen.edges)},
                       {"root", gen.model.var(0).name}};
  io::save_json_file(out_model, model_doc);

  json joint_doc;
  joint_doc["model"] = io::model_to_json(gen.model);
  joint_doc["joint"] = io::valuation_to_json(gen.joint);
  io::save_json_file(out_joint, joint_doc);

  out << "generated " << vars << "-variable tree distribution (seed " << seed
      << "): " << out_model << ", " << out_joint << "\n";
  return 0;
}

int run_sample(const std::string& model_path, int n, uint64_t seed,
               const std::string& out_path, std::ostream& out) {
  io::ModelDocument doc = io::document_from_json(io::load_json_file(model_path));
  if (!doc.joint) throw DataError("sample: no joint valuation in " + model_path);
  SampleDataset data = sample(*doc.joint, n, seed);
  std::ofstream os(out_path);
  if (!os) throw DataError("cannot write '" + out_path + "'");
  io::write_dataset(os, data);
  out << "wrote " << n << " records to " << out_path << "\n";
  return 0;
}

int run_learn(const std::string& from_model, const std::string& from_data,
              const std::string& measure_name, const std::string& out_path,
              const std::string& report_path, const std::string& reference_path,
              std::ostream& out) {
  DepMeasure measure;
  if (measure_name == "dep-bn")
    measure = DepMeasure::dep_bn;
  else if (measure_name == "dep-kl")
    measure = DepMeasure::dep_kl;
  else
    throw UsageError("unknown measure '" + measure_name + "'");

  std::unique_ptr<MarginalSource> src;
  Model model;
  std::vector<std::pair<int, int>> reference_edges;
  if (!from_model.empty()) {
    io::ModelDocument doc =
        io::document_from_json(io::load_json_file(from_model));
    model = doc.model;
    reference_edges = doc.tree_edges;
    BeliefValuation joint =
        doc.joint ? *doc.joint : brute_force_joint(doc.factors);
    src = std::make_unique<ExactMarginalSource>(std::move(joint));
  } else {
    std::ifstream is(from_data);
    if (!is) throw DataError("cannot open '" + from_data + "'");
    SampleDataset data = io::read_dataset(is);
    model = data.scope.model();
    src = std::make_unique<EmpiricalMarginalSource>(std::move(data));
  }
  if (!reference_path.empty()) {
    io::ModelDocument ref =
        io::document_from_json(io::load_json_file(reference_path));
    reference_edges = ref.tree_edges;
  }

  LearnedTree learned = learn_tree(*src, measure);

  if (!out_path.empty()) {
    json net_doc = io::network_to_json(learned.network);
    net_doc["model"] = io::model_to_json(model);
    io::save_json_file(out_path, net_doc);
  }

  json report;
  report["measure"] = measure_name;
  report["root"] = model.var(learned.root).name;
  report["edges"] = tree_edges_json(model, learned.edges);
  json dep = json::array(), arms = json::array();
  for (int i = 0; i < learned.dep.n; ++i) {
    json drow = json::array(), arow = json::array();
    for (int j = 0; j < learned.dep.n; ++j) {
      const DepEntry& e = learned.dep.at(i, j);
      drow.push_back(i == j ? 0.0 : e.value);
      arow.push_back(i == j || e.background < 0
                         ? json("direct")
                         : json(model.var(e.background).name));
    }
    dep.push_back(std::move(drow));
    arms.push_back(std::move(arow));
  }
  report["dep_matrix"] = std::move(dep);
  report["arms"] = std::move(arms);
  report["ties"] = learned.tie_log;

  if (!reference_edges.empty()) {
    std::set<std::pair<int, int>> want, got;
    for (auto [a, b] : reference_edges)
      want.emplace(std::min(a, b), std::max(a, b));
    for (auto [a, b] : learned.edges)
      got.emplace(std::min(a, b), std::max(a, b));
    int ham = 0;
    for (const auto& e : want) ham += !got.count(e);
    for (const auto& e : got) ham += !want.count(e);
    report["reference"] = tree_edges_json(model, reference_edges);
    report["hamming"] = ham;
    report["recovered"] = (ham == 0);
  }
  if (!report_path.empty()) io::save_json_file(report_path, report);
  out << report.dump(2) << "\n";
  return 0;
}

int run_propagate(const std::string& model_path,
                  const std::vector<std::string>& evidence_specs,
                  const std::vector<std::string>& queries, bool normalize,
                  std::ostream& out) {
  io::ModelDocument doc = io::document_from_json(io::load_json_file(model_path));
  MarkovTree tree = tree_from_document(doc);
  std::vector<EvidencePotential> evidence;
  for (const auto& spec : evidence_specs)
    evidence.push_back(parse_evidence(doc.model, spec));

  std::vector<BeliefValuation> marginals = propagate(tree, evidence);

  json result;
  json nodes = json::array();
  for (int k = 0; k < tree.node_count(); ++k) {
    BeliefValuation v = normalize ? normalize_conflict(marginals[k]) : marginals[k];
    nodes.push_back({{"hyperedge", tree.seq.edges[k].var_names()},
                     {"marginal", io::valuation_to_json(v)}});
  }
  result["nodes"] = std::move(nodes);

  json qs = json::array();
  for (const auto& qname : queries) {
    int var = doc.model.require(qname);
    Scope sv(doc.model, {var});
    int home = -1;
    for (int k = 0; k < tree.node_count(); ++k) {
      if (tree.seq.edges[k].contains_var(var)) {
        home = k;
        break;
      }
    }
    if (home < 0) throw DataError("query variable outside the tree: " + qname);
    BeliefValuation vm = marginalize(marginals[home], sv);
    if (normalize) vm = normalize_conflict(vm);
    qs.push_back({{"var", qname}, {"marginal", io::valuation_to_json(vm)}});
  }
  result["queries"] = std::move(qs);
  out << result.dump(2) << "\n";
  return 0;
}

int run_convert(const std::string& model_path, const std::string& out_path,
                std::ostream& out) {
  io::ModelDocument doc = io::document_from_json(io::load_json_file(model_path));
  MarkovTree tree = tree_from_document(doc);
  BeliefNetwork net = hypertree_to_network(tree);
  json net_doc = io::network_to_json(net);
  net_doc["model"] = io::model_to_json(doc.model);
  io::save_json_file(out_path, net_doc);
  out << "wrote network with " << net.dag.size() << " nodes to " << out_path
      << "\n";
  return 0;
}

int run_delta(const std::string& approx_path, const std::string& ref_path,
              std::ostream& out) {
  io::ModelDocument da = io::document_from_json(io::load_json_file(approx_path));
  io::ModelDocument db = io::document_from_json(io::load_json_file(ref_path));
  if (!da.joint || !db.joint)
    throw DataError("delta: both files must carry a joint valuation");
  out << format_scalar(delta_divergence(*da.joint, *db.joint)) << "\n";
  return 0;
}

int run_check(bool axioms, bool theorem4, bool examples, bool roundtrip,
              uint64_t seed, int trials, std::ostream& out) {
  if (!axioms && !theorem4 && !examples && !roundtrip)
    throw UsageError("check: select at least one of --axioms, --theorem4, "
                     "--examples, --roundtrip");
  bool all_pass = true;
  json results = json::array();
  if (axioms) {
    auto r = experiments::axiom_suite(seed, trials > 0 ? trials : 200);
    auto d = experiments::delta_properties(seed + 1, trials > 0 ? trials : 200);
    results.push_back(suite_json(r));
    results.push_back(suite_json(d));
    all_pass = all_pass && r.pass() && d.pass();
  }
  if (theorem4) {
    auto r = experiments::path_inequality(seed, trials > 0 ? trials : 20);
    results.push_back(suite_json(r));
    all_pass = all_pass && r.pass();
  }
  if (examples) {
    auto r = experiments::reference_examples();
    results.push_back({{"suite", "reference-examples"},
                       {"compatible_structures", r.first_count},
                       {"structures_match", r.structures_match},
                       {"cyclic_case_structures", r.second_count},
                       {"pass", r.pass()}});
    all_pass = all_pass && r.pass();
  }
  if (roundtrip) {
    auto r = experiments::conversion_roundtrip(seed, trials > 0 ? trials : 25);
    results.push_back(suite_json(r));
    all_pass = all_pass && r.pass();
  }
  out << json{{"pass", all_pass}, {"results", results}}.dump(2) << "\n";
  return all_pass ? 0 : 3;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Belief-distribution toolkit: valuation algebra, hypertree "
               "propagation, network conversion, and tree recovery"};
  app.require_subcommand(1);

  // generate
  int vars = 5, domain = 2, focal = 3;
  double q_min = 0.05;
  bool bayesian = false;
  uint64_t seed = 1;
  std::string out_model = "model.json", out_joint = "joint.json";
  auto* generate = app.add_subcommand("generate", "random tree distribution");
  generate->add_option("--vars", vars, "variable count (2-10)");
  generate->add_option("--domain-size", domain, "values per variable (2-4)");
  generate->add_option("--focal", focal, "random focal elements per factor");
  generate->add_option("--q-min", q_min, "joint commonality floor");
  generate->add_flag("--bayesian", bayesian, "probabilistic factors");
  generate->add_option("--seed", seed, "generator seed");
  generate->add_option("--out-model", out_model, "model document path");
  generate->add_option("--out-joint", out_joint, "joint document path");

  // sample
  std::string sample_model, sample_out = "data.jsonl";
  int sample_n = 200;
  uint64_t sample_seed = 1;
  auto* smp = app.add_subcommand("sample", "draw focal-set records");
  smp->add_option("-m,--model", sample_model, "joint document")->required();
  smp->add_option("-n,--count", sample_n, "sample size");
  smp->add_option("--seed", sample_seed, "sampling seed");
  smp->add_option("-o,--out", sample_out, "output dataset (JSON lines)");

  // learn
  std::string learn_model, learn_data, learn_measure = "dep-bn";
  std::string learn_out, learn_report, learn_reference;
  auto* learn = app.add_subcommand("learn", "recover a tree network");
  learn->add_option("--from-model", learn_model, "exact source document");
  learn->add_option("--from-data", learn_data, "dataset (JSON lines)");
  learn->add_option("--measure", learn_measure, "dep-bn or dep-kl");
  learn->add_option("--out", learn_out, "network document path");
  learn->add_option("--report", learn_report, "report path");
  learn->add_option("--reference", learn_reference,
                    "model document with the reference tree");

  // propagate
  std::string prop_model;
  std::vector<std::string> prop_evidence, prop_queries;
  bool no_normalize = false;
  auto* prop = app.add_subcommand("propagate", "hyperedge marginals");
  prop->add_option("-m,--model", prop_model, "model document")->required();
  prop->add_option("--evidence", prop_evidence,
                   "VAR=value or VAR=v1|v2@0.8 (repeatable)");
  prop->add_option("--query", prop_queries, "variable marginal (repeatable)");
  prop->add_flag("--no-normalize", no_normalize, "keep conflict mass");

  // convert
  std::string conv_model, conv_out = "network.json";
  auto* conv = app.add_subcommand("convert", "hypertree model to network");
  conv->add_option("-m,--model", conv_model, "model document")->required();
  conv->add_option("-o,--out", conv_out, "network document path");

  // delta
  std::string delta_a, delta_b;
  auto* dlt = app.add_subcommand("delta", "divergence of -a from -b");
  dlt->add_option("-a,--approx", delta_a, "approximation document")->required();
  dlt->add_option("-b,--reference", delta_b, "reference document")->required();

  // check
  bool chk_axioms = false, chk_theorem4 = false, chk_examples = false,
       chk_roundtrip = false;
  uint64_t chk_seed = 20250809;
  int chk_trials = 0;
  auto* chk = app.add_subcommand("check", "property suites");
  chk->add_flag("--axioms", chk_axioms, "algebra axioms and divergence rules");
  chk->add_flag("--theorem4", chk_theorem4, "path dependence inequality");
  chk->add_flag("--examples", chk_examples, "reference hypergraph structures");
  chk->add_flag("--roundtrip", chk_roundtrip, "conversion round-trip");
  chk->add_option("--seed", chk_seed, "suite seed");
  chk->add_option("--trials", chk_trials, "override trial counts");

  std::vector<const char*> argv;
  argv.push_back("beltree");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (generate->parsed())
      return run_generate(vars, domain, focal, q_min, bayesian, seed, out_model,
                          out_joint, out);
    if (smp->parsed())
      return run_sample(sample_model, sample_n, sample_seed, sample_out, out);
    if (learn->parsed()) {
      if (learn_model.empty() == learn_data.empty())
        throw UsageError("learn: exactly one of --from-model / --from-data");
      return run_learn(learn_model, learn_data, learn_measure, learn_out,
                       learn_report, learn_reference, out);
    }
    if (prop->parsed())
      return run_propagate(prop_model, prop_evidence, prop_queries,
                           !no_normalize, out);
    if (conv->parsed()) return run_convert(conv_model, conv_out, out);
    if (dlt->parsed()) return run_delta(delta_a, delta_b, out);
    if (chk->parsed())
      return run_check(chk_axioms, chk_theorem4, chk_examples, chk_roundtrip,
                       chk_seed, chk_trials, out);
    throw UsageError("no subcommand selected");
  } catch (const CLI::CallForHelp&) {
    out << app.help() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace beltree::cli
