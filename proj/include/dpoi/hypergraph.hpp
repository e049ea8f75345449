#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dpoi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LabelType {
  std::string label;
  std::size_t arity = 0;
  std::size_t coarity = 0;

  bool operator==(const LabelType&) const = default;
};

// Signature: a set of labels, each with a fixed arity and coarity.
// Entries keep insertion order; that order is used wherever labels are
// iterated (e.g. the per-label product of gluing schemes).
class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<LabelType> entries) {
    for (const auto& e : entries) add(e.label, e.arity, e.coarity);
  }

  void add(std::string label, std::size_t arity, std::size_t coarity) {
    if (auto it = index_.find(label); it != index_.end()) {
      const auto& existing = entries_[it->second];
      if (existing.arity != arity || existing.coarity != coarity)
        throw Error("label '" + label + "' declared twice with different types");
      return;
    }
    index_.emplace(label, entries_.size());
    entries_.push_back(LabelType{std::move(label), arity, coarity});
  }

  const LabelType* find(std::string_view label) const {
    auto it = index_.find(label);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  bool contains(std::string_view label) const { return find(label) != nullptr; }
  const std::vector<LabelType>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const Signature& other) const { return entries_ == other.entries_; }

 private:
  std::vector<LabelType> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

struct Hyperedge {
  std::string id;
  std::string label;
  std::vector<NodeIndex> sources;
  std::vector<NodeIndex> targets;
};

// An occurrence of a node in an edge's source or target list.
struct Port {
  EdgeIndex edge;
  std::size_t position;
};

struct Degrees {
  std::size_t in = 0;
  std::size_t out = 0;

  bool operator==(const Degrees&) const = default;
};

// A Σ-labelled directed hypergraph. Nodes and edges are indexed densely in
// insertion order and carry opaque string ids. Values are built once and then
// shared immutably through HypergraphPtr.
class Hypergraph {
 public:
  explicit Hypergraph(SignaturePtr signature) : signature_(std::move(signature)) {
    if (!signature_) throw Error("hypergraph requires a signature");
  }

  NodeIndex add_node(std::string id) {
    if (node_index_.contains(id)) throw Error("duplicate node id '" + id + "'");
    const NodeIndex v = nodes_.size();
    node_index_.emplace(id, v);
    nodes_.push_back(std::move(id));
    in_ports_.emplace_back();
    out_ports_.emplace_back();
    return v;
  }

  EdgeIndex add_edge(std::string id, std::string label, std::vector<NodeIndex> sources,
                     std::vector<NodeIndex> targets) {
    if (edge_index_.contains(id)) throw Error("duplicate edge id '" + id + "'");
    const LabelType* type = signature_->find(label);
    if (type == nullptr) throw Error("label '" + label + "' is not in the signature");
    if (sources.size() != type->arity || targets.size() != type->coarity)
      throw Error("edge '" + id + "' does not match the arity/coarity of '" + label + "'");
    for (NodeIndex v : sources)
      if (v >= nodes_.size()) throw Error("edge '" + id + "' references a missing node");
    for (NodeIndex v : targets)
      if (v >= nodes_.size()) throw Error("edge '" + id + "' references a missing node");

    const EdgeIndex e = edges_.size();
    for (std::size_t i = 0; i < sources.size(); ++i) out_ports_[sources[i]].push_back({e, i});
    for (std::size_t i = 0; i < targets.size(); ++i) in_ports_[targets[i]].push_back({e, i});
    edge_index_.emplace(id, e);
    edges_.push_back(Hyperedge{std::move(id), std::move(label), std::move(sources), std::move(targets)});
    return e;
  }

  // Convenience overload taking node ids.
  EdgeIndex add_edge_by_ids(std::string id, std::string label,
                            const std::vector<std::string>& sources,
                            const std::vector<std::string>& targets) {
    std::vector<NodeIndex> s, t;
    for (const auto& n : sources) s.push_back(node_index(n));
    for (const auto& n : targets) t.push_back(node_index(n));
    return add_edge(std::move(id), std::move(label), std::move(s), std::move(t));
  }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty() && edges_.empty(); }
  bool is_discrete() const { return edges_.empty(); }

  const std::string& node_id(NodeIndex v) const { return nodes_.at(v); }
  const Hyperedge& edge(EdgeIndex e) const { return edges_.at(e); }
  const std::vector<std::string>& node_ids() const { return nodes_; }
  const std::vector<Hyperedge>& edges() const { return edges_; }

  std::optional<NodeIndex> find_node(std::string_view id) const {
    auto it = node_index_.find(std::string(id));
    if (it == node_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<EdgeIndex> find_edge(std::string_view id) const {
    auto it = edge_index_.find(std::string(id));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  NodeIndex node_index(std::string_view id) const {
    if (auto v = find_node(id)) return *v;
    throw Error("node not in graph: '" + std::string(id) + "'");
  }
  EdgeIndex edge_index(std::string_view id) const {
    if (auto e = find_edge(id)) return *e;
    throw Error("edge not in graph: '" + std::string(id) + "'");
  }

  // Ports where v occurs as a target (incoming) or as a source (outgoing).
  std::span<const Port> in_ports(NodeIndex v) const { return in_ports_.at(v); }
  std::span<const Port> out_ports(NodeIndex v) const { return out_ports_.at(v); }

  Degrees degrees(NodeIndex v) const {
    if (v >= nodes_.size()) throw Error("node not in graph");
    return {in_ports_[v].size(), out_ports_[v].size()};
  }

  const Signature& signature() const { return *signature_; }
  const SignaturePtr& signature_ptr() const { return signature_; }

 private:
  SignaturePtr signature_;
  std::vector<std::string> nodes_;
  std::vector<Hyperedge> edges_;
  std::unordered_map<std::string, NodeIndex> node_index_;
  std::unordered_map<std::string, EdgeIndex> edge_index_;
  std::vector<std::vector<Port>> in_ports_;
  std::vector<std::vector<Port>> out_ports_;
};

using HypergraphPtr = std::shared_ptr<const Hypergraph>;

inline Degrees degrees(const Hypergraph& g, std::string_view node_id) {
  return g.degrees(g.node_index(node_id));
}

inline HypergraphPtr discrete_graph(SignaturePtr sig, const std::vector<std::string>& ids) {
  auto g = std::make_shared<Hypergraph>(std::move(sig));
  for (const auto& id : ids) g->add_node(id);
  return g;
}

// in(G): nodes with in-degree 0, in node order.
inline std::vector<NodeIndex> input_nodes(const Hypergraph& g) {
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < g.node_count(); ++v)
    if (g.in_ports(v).empty()) out.push_back(v);
  return out;
}

// out(G): nodes with out-degree 0, in node order.
inline std::vector<NodeIndex> output_nodes(const Hypergraph& g) {
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < g.node_count(); ++v)
    if (g.out_ports(v).empty()) out.push_back(v);
  return out;
}

inline bool is_monogamous(const Hypergraph& g) {
  for (NodeIndex v = 0; v < g.node_count(); ++v)
    if (g.in_ports(v).size() > 1 || g.out_ports(v).size() > 1) return false;
  return true;
}

// Kahn's algorithm on the bipartite node/edge incidence graph. A hyperedge is
// released once all of its source nodes are; a node once all edges that
// target it are.
inline bool is_acyclic(const Hypergraph& g) {
  std::vector<std::size_t> node_pending(g.node_count());
  std::vector<std::size_t> edge_pending(g.edge_count());
  std::queue<NodeIndex> ready;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    node_pending[v] = g.in_ports(v).size();
    if (node_pending[v] == 0) ready.push(v);
  }
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) edge_pending[e] = g.edge(e).sources.size();

  std::size_t released_edges = 0;
  std::vector<EdgeIndex> ready_edges;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e)
    if (edge_pending[e] == 0) ready_edges.push_back(e);

  auto release_edge = [&](EdgeIndex e) {
    ++released_edges;
    for (NodeIndex t : g.edge(e).targets)
      if (--node_pending[t] == 0) ready.push(t);
  };
  for (EdgeIndex e : ready_edges) release_edge(e);

  while (!ready.empty()) {
    const NodeIndex v = ready.front();
    ready.pop();
    for (const Port& p : g.out_ports(v))
      if (--edge_pending[p.edge] == 0) release_edge(p.edge);
  }
  return released_edges == g.edge_count();
}

inline bool is_monogamous_acyclic(const Hypergraph& g) {
  return is_monogamous(g) && is_acyclic(g);
}

// Nodes reachable from `from` by a (possibly empty) directed path.
inline std::vector<bool> reachable_nodes(const Hypergraph& g, NodeIndex from) {
  std::vector<bool> seen(g.node_count(), false);
  std::vector<bool> edge_seen(g.edge_count(), false);
  std::vector<NodeIndex> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    for (const Port& p : g.out_ports(v)) {
      if (edge_seen[p.edge]) continue;
      edge_seen[p.edge] = true;
      for (NodeIndex t : g.edge(p.edge).targets)
        if (!seen[t]) {
          seen[t] = true;
          stack.push_back(t);
        }
    }
  }
  return seen;
}

// Every input reaches every output. Callers are expected to have checked
// monogamous acyclicity; the empty graph is vacuously strongly connected.
inline bool is_strongly_connected(const Hypergraph& g) {
  const auto outs = output_nodes(g);
  for (NodeIndex x : input_nodes(g)) {
    const auto reach = reachable_nodes(g, x);
    for (NodeIndex y : outs)
      if (!reach[y]) return false;
  }
  return true;
}

// A structure-preserving map between hypergraphs, stored as dense index maps.
struct Morphism {
  HypergraphPtr source;
  HypergraphPtr target;
  std::vector<NodeIndex> nodes;
  std::vector<EdgeIndex> edges;
};

// Checks totality and that sources, targets and labels are respected.
inline bool is_homomorphism(const Morphism& m) {
  if (!m.source || !m.target) return false;
  const Hypergraph& a = *m.source;
  const Hypergraph& b = *m.target;
  if (m.nodes.size() != a.node_count() || m.edges.size() != a.edge_count()) return false;
  for (NodeIndex v : m.nodes)
    if (v >= b.node_count()) return false;
  for (EdgeIndex e = 0; e < a.edge_count(); ++e) {
    if (m.edges[e] >= b.edge_count()) return false;
    const Hyperedge& x = a.edge(e);
    const Hyperedge& y = b.edge(m.edges[e]);
    if (x.label != y.label || x.sources.size() != y.sources.size() ||
        x.targets.size() != y.targets.size())
      return false;
    for (std::size_t i = 0; i < x.sources.size(); ++i)
      if (m.nodes[x.sources[i]] != y.sources[i]) return false;
    for (std::size_t i = 0; i < x.targets.size(); ++i)
      if (m.nodes[x.targets[i]] != y.targets[i]) return false;
  }
  return true;
}

inline Morphism identity_morphism(const HypergraphPtr& g) {
  Morphism m{g, g, {}, {}};
  m.nodes.resize(g->node_count());
  m.edges.resize(g->edge_count());
  for (NodeIndex v = 0; v < g->node_count(); ++v) m.nodes[v] = v;
  for (EdgeIndex e = 0; e < g->edge_count(); ++e) m.edges[e] = e;
  return m;
}

// Diagrammatic composition f;g (first f, then g).
inline Morphism compose(const Morphism& f, const Morphism& g) {
  if (f.target != g.source && !(f.target->node_count() == g.source->node_count() &&
                                f.target->edge_count() == g.source->edge_count()))
    throw Error("compose: morphisms are not composable");
  Morphism h{f.source, g.target, {}, {}};
  h.nodes.reserve(f.nodes.size());
  h.edges.reserve(f.edges.size());
  for (NodeIndex v : f.nodes) h.nodes.push_back(g.nodes.at(v));
  for (EdgeIndex e : f.edges) h.edges.push_back(g.edges.at(e));
  return h;
}

namespace detail {
inline bool injective(const std::vector<std::size_t>& map, std::size_t codomain) {
  std::vector<bool> hit(codomain, false);
  for (std::size_t x : map) {
    if (hit[x]) return false;
    hit[x] = true;
  }
  return true;
}
inline bool surjective(const std::vector<std::size_t>& map, std::size_t codomain) {
  std::vector<bool> hit(codomain, false);
  std::size_t count = 0;
  for (std::size_t x : map)
    if (!hit[x]) {
      hit[x] = true;
      ++count;
    }
  return count == codomain;
}
}  // namespace detail

inline bool is_mono(const Morphism& m) {
  return detail::injective(m.nodes, m.target->node_count()) &&
         detail::injective(m.edges, m.target->edge_count());
}

inline bool is_epi(const Morphism& m) {
  return detail::surjective(m.nodes, m.target->node_count()) &&
         detail::surjective(m.edges, m.target->edge_count());
}

inline bool is_iso(const Morphism& m) { return is_mono(m) && is_epi(m); }

inline Morphism inverse(const Morphism& m) {
  if (!is_iso(m)) throw Error("inverse: morphism is not an isomorphism");
  Morphism inv{m.target, m.source, std::vector<NodeIndex>(m.nodes.size()),
               std::vector<EdgeIndex>(m.edges.size())};
  for (NodeIndex v = 0; v < m.nodes.size(); ++v) inv.nodes[m.nodes[v]] = v;
  for (EdgeIndex e = 0; e < m.edges.size(); ++e) inv.edges[m.edges[e]] = e;
  return inv;
}

// A hypergraph together with ordered input and output node lists
// (a cospan n -> G <- m with discrete feet).
struct InterfacedHypergraph {
  HypergraphPtr graph;
  std::vector<NodeIndex> inputs;
  std::vector<NodeIndex> outputs;
};

namespace detail {
inline bool distinct(const std::vector<NodeIndex>& xs) {
  auto sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}
inline bool same_set(std::vector<NodeIndex> a, std::vector<NodeIndex> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}
}  // namespace detail

// ma-cospan: the graph is monogamous acyclic and the interface legs are mono
// onto in(G) and out(G) respectively.
inline bool is_ma_cospan(const InterfacedHypergraph& h) {
  const Hypergraph& g = *h.graph;
  return is_monogamous_acyclic(g) && detail::distinct(h.inputs) &&
         detail::distinct(h.outputs) && detail::same_set(h.inputs, input_nodes(g)) &&
         detail::same_set(h.outputs, output_nodes(g));
}

// The cospan in(G) -> G <- out(G), both legs listed in node order.
inline InterfacedHypergraph boundary_cospan(const HypergraphPtr& g) {
  return {g, input_nodes(*g), output_nodes(*g)};
}

}  // namespace dpoi
