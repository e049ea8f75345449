#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dpoi/dpoi.hpp"

namespace fixtures {

using namespace dpoi;

inline std::string data_path(const std::string& name) { return std::string(DPOI_DATA_DIR) + "/" + name; }

inline RewriteSystem bimonoid() { return load_system(data_path("bimonoid.json")); }
inline RewriteSystem worked_example() { return load_system(data_path("worked_example.json")); }
inline RewriteSystem non_confluent() { return load_system(data_path("non_confluent.json")); }

inline std::vector<std::string> corpus_files() {
  return {"worked_example.json", "bimonoid.json", "non_confluent.json"};
}

inline SignaturePtr monoid_signature() {
  return std::make_shared<Signature>(Signature{{"mu", 2, 1}, {"eta", 0, 1}, {"delta", 1, 2}, {"epsilon", 1, 0}});
}

struct EdgeSpec {
  std::string id, label;
  std::vector<std::string> sources, targets;
};

inline HypergraphPtr graph(const SignaturePtr& sig, const std::vector<std::string>& nodes,
                           const std::vector<EdgeSpec>& edges) {
  auto g = std::make_shared<Hypergraph>(sig);
  for (const auto& n : nodes) g->add_node(n);
  for (const auto& e : edges) g->add_edge_by_ids(e.id, e.label, e.sources, e.targets);
  return g;
}

inline InterfacedHypergraph interfaced(const HypergraphPtr& g, const std::vector<std::string>& in,
                                       const std::vector<std::string>& out) {
  InterfacedHypergraph h{g, {}, {}};
  for (const auto& n : in) h.inputs.push_back(g->node_index(n));
  for (const auto& n : out) h.outputs.push_back(g->node_index(n));
  return h;
}

// μ(μ(x, y), z) as an ma-cospan with inputs x y z and output r.
inline InterfacedHypergraph left_nested_product(const SignaturePtr& sig) {
  auto g = graph(sig, {"x", "y", "z", "m", "r"}, {{"a", "mu", {"x", "y"}, {"m"}}, {"b", "mu", {"m", "z"}, {"r"}}});
  return interfaced(g, {"x", "y", "z"}, {"r"});
}

}  // namespace fixtures
