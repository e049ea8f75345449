#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpoi/confluence.hpp"
#include "dpoi/critical_pairs.hpp"
#include "dpoi/hypergraph.hpp"
#include "dpoi/rewriting.hpp"

namespace dpoi {

using Json = nlohmann::json;

// Malformed input; the message carries a line/column or a JSON pointer.
class ParseError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline const Json& field(const Json& obj, const char* name, const std::string& at) {
  if (!obj.is_object()) throw ParseError("at " + at + ": expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError("at " + at + ": missing field '" + name + "'");
  return *it;
}

inline std::string as_string(const Json& j, const std::string& at) {
  if (!j.is_string()) throw ParseError("at " + at + ": expected a string");
  return j.get<std::string>();
}

inline std::size_t as_count(const Json& j, const std::string& at) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw ParseError("at " + at + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline const Json& as_array(const Json& j, const std::string& at) {
  if (!j.is_array()) throw ParseError("at " + at + ": expected an array");
  return j;
}

inline std::vector<std::string> string_list(const Json& j, const std::string& at) {
  std::vector<std::string> out;
  const Json& arr = as_array(j, at);
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(as_string(arr[k], at + "/" + std::to_string(k)));
  return out;
}

template <class Fn>
auto rethrow_at(const std::string& at, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("at " + at + ": " + e.what());
  }
}

}  // namespace detail

inline Json to_json(const Signature& sig) {
  Json out = Json::array();
  for (const auto& e : sig.entries()) out.push_back({{"label", e.label}, {"arity", e.arity}, {"coarity", e.coarity}});
  return out;
}

inline SignaturePtr signature_from_json(const Json& j, const std::string& at = "") {
  auto sig = std::make_shared<Signature>();
  const Json& arr = detail::as_array(j, at.empty() ? "/" : at);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string here = at + "/" + std::to_string(k);
    auto label = detail::as_string(detail::field(arr[k], "label", here), here + "/label");
    auto arity = detail::as_count(detail::field(arr[k], "arity", here), here + "/arity");
    auto coarity = detail::as_count(detail::field(arr[k], "coarity", here), here + "/coarity");
    detail::rethrow_at(here, [&] {
      sig->add(label, arity, coarity);
      return 0;
    });
  }
  return sig;
}

inline Json to_json(const Hypergraph& g) {
  Json nodes = Json::array();
  for (const auto& id : g.node_ids()) nodes.push_back(id);
  Json edges = Json::array();
  for (const auto& e : g.edges()) {
    Json s = Json::array(), t = Json::array();
    for (NodeIndex v : e.sources) s.push_back(g.node_id(v));
    for (NodeIndex v : e.targets) t.push_back(g.node_id(v));
    edges.push_back({{"id", e.id}, {"label", e.label}, {"sources", s}, {"targets", t}});
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

inline HypergraphPtr hypergraph_from_json(const Json& j, const SignaturePtr& sig, const std::string& at = "") {
  auto g = std::make_shared<Hypergraph>(sig);
  const auto nodes = detail::string_list(detail::field(j, "nodes", at), at + "/nodes");
  for (std::size_t k = 0; k < nodes.size(); ++k)
    detail::rethrow_at(at + "/nodes/" + std::to_string(k), [&] { return g->add_node(nodes[k]); });
  const Json& edges = detail::as_array(detail::field(j, "edges", at), at + "/edges");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string here = at + "/edges/" + std::to_string(k);
    auto id = detail::as_string(detail::field(edges[k], "id", here), here + "/id");
    auto label = detail::as_string(detail::field(edges[k], "label", here), here + "/label");
    auto s = detail::string_list(detail::field(edges[k], "sources", here), here + "/sources");
    auto t = detail::string_list(detail::field(edges[k], "targets", here), here + "/targets");
    detail::rethrow_at(here, [&] { return g->add_edge_by_ids(id, label, s, t); });
  }
  return g;
}

inline Json to_json(const InterfacedHypergraph& h) {
  Json out = to_json(*h.graph);
  Json in = Json::array(), o = Json::array();
  for (NodeIndex v : h.inputs) in.push_back(h.graph->node_id(v));
  for (NodeIndex v : h.outputs) o.push_back(h.graph->node_id(v));
  out["inputs"] = in;
  out["outputs"] = o;
  return out;
}

inline InterfacedHypergraph interfaced_from_json(const Json& j, const SignaturePtr& sig, const std::string& at = "") {
  InterfacedHypergraph h{hypergraph_from_json(j, sig, at), {}, {}};
  const auto in = detail::string_list(detail::field(j, "inputs", at), at + "/inputs");
  const auto out = detail::string_list(detail::field(j, "outputs", at), at + "/outputs");
  for (std::size_t k = 0; k < in.size(); ++k)
    h.inputs.push_back(detail::rethrow_at(at + "/inputs/" + std::to_string(k), [&] { return h.graph->node_index(in[k]); }));
  for (std::size_t k = 0; k < out.size(); ++k)
    h.outputs.push_back(detail::rethrow_at(at + "/outputs/" + std::to_string(k), [&] { return h.graph->node_index(out[k]); }));
  return h;
}

inline Json to_json(const RewriteRule& r) {
  return {{"name", r.name}, {"left", to_json(r.left)}, {"right", to_json(r.right)}};
}

inline Json to_json(const RewriteSystem& sys) {
  Json rules = Json::array();
  for (const auto& r : sys.rules) rules.push_back(to_json(r));
  return {{"signature", to_json(*sys.signature)}, {"rules", rules}};
}

inline RewriteSystem system_from_json(const Json& j) {
  RewriteSystem sys;
  sys.signature = signature_from_json(detail::field(j, "signature", "/"), "/signature");
  const Json& rules = detail::as_array(detail::field(j, "rules", "/"), "/rules");
  for (std::size_t k = 0; k < rules.size(); ++k) {
    const std::string here = "/rules/" + std::to_string(k);
    RewriteRule r;
    r.name = detail::as_string(detail::field(rules[k], "name", here), here + "/name");
    r.left = interfaced_from_json(detail::field(rules[k], "left", here), sys.signature, here + "/left");
    r.right = interfaced_from_json(detail::field(rules[k], "right", here), sys.signature, here + "/right");
    sys.rules.push_back(std::move(r));
  }
  return sys;
}

inline RewriteSystem parse_system(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
  return system_from_json(j);
}

inline RewriteSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_system(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Json morphism_to_json(const Morphism& m) {
  Json nodes = Json::object(), edges = Json::object();
  for (NodeIndex v = 0; v < m.nodes.size(); ++v) nodes[m.source->node_id(v)] = m.target->node_id(m.nodes[v]);
  for (EdgeIndex e = 0; e < m.edges.size(); ++e) edges[m.source->edge(e).id] = m.target->edge(m.edges[e]).id;
  return {{"nodes", nodes}, {"edges", edges}};
}

inline Morphism morphism_from_json(const Json& j, const HypergraphPtr& source, const HypergraphPtr& target,
                                   const std::string& at = "") {
  Morphism m{source, target, std::vector<NodeIndex>(source->node_count()),
             std::vector<EdgeIndex>(source->edge_count())};
  const Json& nodes = detail::field(j, "nodes", at);
  const Json& edges = detail::field(j, "edges", at);
  for (NodeIndex v = 0; v < source->node_count(); ++v) {
    const auto& id = source->node_id(v);
    const std::string here = at + "/nodes/" + id;
    m.nodes[v] = detail::rethrow_at(here, [&] {
      return target->node_index(detail::as_string(detail::field(nodes, id.c_str(), at + "/nodes"), here));
    });
  }
  for (EdgeIndex e = 0; e < source->edge_count(); ++e) {
    const auto& id = source->edge(e).id;
    const std::string here = at + "/edges/" + id;
    m.edges[e] = detail::rethrow_at(here, [&] {
      return target->edge_index(detail::as_string(detail::field(edges, id.c_str(), at + "/edges"), here));
    });
  }
  if (!is_homomorphism(m)) throw ParseError("at " + at + ": not a hypergraph morphism");
  return m;
}

inline Json to_json(const RewriteSystem& sys, const CriticalPairCandidate& c) {
  const Hypergraph& li = *sys.rules.at(c.rule_i).left.graph;
  const Hypergraph& lj = *sys.rules.at(c.rule_j).left.graph;
  const Hypergraph& s_gamma = *c.edge_gluing.target;
  Json edges = Json::array(), nodes = Json::array();
  for (auto [a, b] : c.edge_scheme) edges.push_back({li.edge(a).id, lj.edge(b).id});
  for (auto [a, b] : c.node_scheme) nodes.push_back({s_gamma.node_id(a), s_gamma.node_id(b)});
  return {{"rule_i", c.rule_i},
          {"rule_j", c.rule_j},
          {"glued_edges", edges},
          {"glued_nodes", nodes},
          {"source", to_json(c.source)},
          {"match1", morphism_to_json(c.match1)},
          {"match2", morphism_to_json(c.match2)}};
}

// The parts of a critical-pair record needed to rebuild the cp-cospan.
struct ParsedCriticalPair {
  std::size_t rule_i = 0;
  std::size_t rule_j = 0;
  InterfacedHypergraph source;
  Morphism match1;
  Morphism match2;
};

inline ParsedCriticalPair critical_pair_from_json(const RewriteSystem& sys, const Json& j) {
  ParsedCriticalPair p;
  p.rule_i = detail::as_count(detail::field(j, "rule_i", "/"), "/rule_i");
  p.rule_j = detail::as_count(detail::field(j, "rule_j", "/"), "/rule_j");
  if (p.rule_i >= sys.rules.size() || p.rule_j >= sys.rules.size())
    throw ParseError("at /rule_i: rule index out of range");
  p.source = interfaced_from_json(detail::field(j, "source", "/"), sys.signature, "/source");
  p.match1 = morphism_from_json(detail::field(j, "match1", "/"), sys.rules[p.rule_i].left.graph, p.source.graph, "/match1");
  p.match2 = morphism_from_json(detail::field(j, "match2", "/"), sys.rules[p.rule_j].left.graph, p.source.graph, "/match2");
  return p;
}

inline Json derivation_step_to_json(const RewriteSystem& sys, const Derivation& d) {
  return {{"rule", d.rule_index},
          {"rule_name", sys.rules.at(d.rule_index).name},
          {"match", morphism_to_json(d.match)},
          {"result", to_json(d.result)}};
}

inline Json to_json(const RewriteSystem& sys, const ConfluenceReport& report) {
  Json pairs = Json::array();
  for (const auto& p : report.pairs) {
    Json entry{{"pair", to_json(sys, p.pair)}, {"depth", p.join.depth}, {"status", to_string(p.join.status)}};
    switch (p.join.status) {
      case JoinStatus::Joinable: {
        entry["joinable"] = true;
        Json left = Json::array(), right = Json::array();
        for (const auto& d : p.join.left_witness) left.push_back(derivation_step_to_json(sys, d));
        for (const auto& d : p.join.right_witness) right.push_back(derivation_step_to_json(sys, d));
        entry["witness"] = {{"left", left}, {"right", right}};
        break;
      }
      case JoinStatus::NotJoinable: entry["joinable"] = false; break;
      case JoinStatus::NotJoinableWithin: entry["joinable"] = nullptr; break;
    }
    if (p.join.status != JoinStatus::Joinable) entry["divergence"] = {{"h1", to_json(p.h1)}, {"h2", to_json(p.h2)}};
    pairs.push_back(std::move(entry));
  }
  return {{"verdict", to_string(report.verdict)}, {"pairs", pairs}};
}

}  // namespace dpoi
