#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "dpoi/hypergraph.hpp"

namespace dpoi {

namespace detail {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return h ^ x;
}

inline std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct Coloring {
  std::vector<std::uint64_t> node;
  std::vector<std::uint64_t> edge;
};

// Colour refinement seeded with labels, degrees and interface positions. The
// result is an isomorphism invariant for interface-preserving isomorphisms.
inline Coloring refine_colors(const InterfacedHypergraph& h) {
  const Hypergraph& g = *h.graph;
  Coloring c{std::vector<std::uint64_t>(g.node_count()), std::vector<std::uint64_t>(g.edge_count())};
  for (NodeIndex v = 0; v < g.node_count(); ++v)
    c.node[v] = mix(mix(17, g.in_ports(v).size()), g.out_ports(v).size());
  for (std::size_t i = 0; i < h.inputs.size(); ++i)
    c.node[h.inputs[i]] = mix(mix(c.node[h.inputs[i]], 0x1000 + i), 1);
  for (std::size_t i = 0; i < h.outputs.size(); ++i)
    c.node[h.outputs[i]] = mix(mix(c.node[h.outputs[i]], 0x2000 + i), 2);
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) c.edge[e] = hash_string(g.edge(e).label);

  const std::size_t rounds = std::min<std::size_t>(g.node_count() + g.edge_count(), 12);
  for (std::size_t r = 0; r < rounds; ++r) {
    std::vector<std::uint64_t> edge_next(g.edge_count());
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      std::uint64_t x = c.edge[e];
      for (NodeIndex v : g.edge(e).sources) x = mix(x, c.node[v]);
      x = mix(x, 0xabcd);
      for (NodeIndex v : g.edge(e).targets) x = mix(x, c.node[v]);
      edge_next[e] = x;
    }
    std::vector<std::uint64_t> node_next(g.node_count());
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
      std::vector<std::uint64_t> around;
      for (const Port& p : g.in_ports(v)) around.push_back(mix(mix(c.edge[p.edge], 1), p.position));
      for (const Port& p : g.out_ports(v)) around.push_back(mix(mix(c.edge[p.edge], 2), p.position));
      std::sort(around.begin(), around.end());
      std::uint64_t x = c.node[v];
      for (auto a : around) x = mix(x, a);
      node_next[v] = x;
    }
    c.edge = std::move(edge_next);
    c.node = std::move(node_next);
  }
  return c;
}

class IsomorphismSearch {
 public:
  IsomorphismSearch(const InterfacedHypergraph& a, const InterfacedHypergraph& b)
      : a_(a), b_(b), ga_(*a.graph), gb_(*b.graph) {}

  std::optional<Morphism> run() {
    if (ga_.node_count() != gb_.node_count() || ga_.edge_count() != gb_.edge_count() ||
        a_.inputs.size() != b_.inputs.size() || a_.outputs.size() != b_.outputs.size())
      return std::nullopt;
    ca_ = refine_colors(a_);
    cb_ = refine_colors(b_);
    {
      auto na = ca_.node, nb = cb_.node, ea = ca_.edge, eb = cb_.edge;
      std::sort(na.begin(), na.end());
      std::sort(nb.begin(), nb.end());
      std::sort(ea.begin(), ea.end());
      std::sort(eb.begin(), eb.end());
      if (na != nb || ea != eb) return std::nullopt;
    }
    node_map_.assign(ga_.node_count(), kUnset);
    node_inv_.assign(gb_.node_count(), kUnset);
    edge_map_.assign(ga_.edge_count(), kUnset);
    edge_used_.assign(gb_.edge_count(), false);

    std::vector<NodeIndex> undo;
    for (std::size_t i = 0; i < a_.inputs.size(); ++i)
      if (!assign(a_.inputs[i], b_.inputs[i], undo)) return std::nullopt;
    for (std::size_t i = 0; i < a_.outputs.size(); ++i)
      if (!assign(a_.outputs[i], b_.outputs[i], undo)) return std::nullopt;

    order_edges();
    if (!search(0)) return std::nullopt;

    // Remaining nodes are isolated; pair them up by colour.
    std::map<std::uint64_t, std::vector<NodeIndex>> free_b;
    for (NodeIndex v = 0; v < gb_.node_count(); ++v)
      if (node_inv_[v] == kUnset) free_b[cb_.node[v]].push_back(v);
    for (NodeIndex v = 0; v < ga_.node_count(); ++v) {
      if (node_map_[v] != kUnset) continue;
      auto& pool = free_b[ca_.node[v]];
      if (pool.empty()) return std::nullopt;
      node_map_[v] = pool.back();
      pool.pop_back();
    }
    Morphism m{a_.graph, b_.graph, node_map_, edge_map_};
    return m;
  }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  bool assign(NodeIndex x, NodeIndex y, std::vector<NodeIndex>& undo) {
    if (node_map_[x] != kUnset) return node_map_[x] == y;
    if (node_inv_[y] != kUnset) return false;
    if (ca_.node[x] != cb_.node[y]) return false;
    node_map_[x] = y;
    node_inv_[y] = x;
    undo.push_back(x);
    return true;
  }

  void rollback(std::vector<NodeIndex>& undo) {
    for (NodeIndex x : undo) {
      node_inv_[node_map_[x]] = kUnset;
      node_map_[x] = kUnset;
    }
    undo.clear();
  }

  // Edges in breadth-first order from the interface so that node bindings
  // propagate early.
  void order_edges() {
    std::vector<bool> seen(ga_.edge_count(), false);
    std::vector<bool> node_seen(ga_.node_count(), false);
    std::queue<NodeIndex> q;
    auto visit_node = [&](NodeIndex v) {
      if (!node_seen[v]) {
        node_seen[v] = true;
        q.push(v);
      }
    };
    auto drain = [&] {
      while (!q.empty()) {
        NodeIndex v = q.front();
        q.pop();
        auto visit_edge = [&](EdgeIndex e) {
          if (seen[e]) return;
          seen[e] = true;
          order_.push_back(e);
          for (NodeIndex s : ga_.edge(e).sources) visit_node(s);
          for (NodeIndex t : ga_.edge(e).targets) visit_node(t);
        };
        for (const Port& p : ga_.in_ports(v)) visit_edge(p.edge);
        for (const Port& p : ga_.out_ports(v)) visit_edge(p.edge);
      }
    };
    for (NodeIndex v : a_.inputs) visit_node(v);
    for (NodeIndex v : a_.outputs) visit_node(v);
    drain();
    for (EdgeIndex e = 0; e < ga_.edge_count(); ++e) {
      if (seen[e]) continue;
      seen[e] = true;
      order_.push_back(e);
      for (NodeIndex s : ga_.edge(e).sources) visit_node(s);
      for (NodeIndex t : ga_.edge(e).targets) visit_node(t);
      drain();
    }
  }

  bool search(std::size_t k) {
    if (k == order_.size()) return true;
    const EdgeIndex ea = order_[k];
    const Hyperedge& x = ga_.edge(ea);
    for (EdgeIndex eb = 0; eb < gb_.edge_count(); ++eb) {
      if (edge_used_[eb] || ca_.edge[ea] != cb_.edge[eb]) continue;
      const Hyperedge& y = gb_.edge(eb);
      if (x.label != y.label) continue;
      std::vector<NodeIndex> undo;
      bool ok = true;
      for (std::size_t i = 0; ok && i < x.sources.size(); ++i) ok = assign(x.sources[i], y.sources[i], undo);
      for (std::size_t i = 0; ok && i < x.targets.size(); ++i) ok = assign(x.targets[i], y.targets[i], undo);
      if (ok) {
        edge_map_[ea] = eb;
        edge_used_[eb] = true;
        if (search(k + 1)) return true;
        edge_used_[eb] = false;
        edge_map_[ea] = kUnset;
      }
      rollback(undo);
    }
    return false;
  }

  const InterfacedHypergraph& a_;
  const InterfacedHypergraph& b_;
  const Hypergraph& ga_;
  const Hypergraph& gb_;
  Coloring ca_, cb_;
  std::vector<NodeIndex> node_map_, node_inv_;
  std::vector<EdgeIndex> edge_map_;
  std::vector<bool> edge_used_;
  std::vector<EdgeIndex> order_;
};

// Numbers elements in traversal order starting from `seeds` (nodes) or from a
// single start edge. Only valid for monogamous graphs, where every step of the
// traversal is forced.
class Traversal {
 public:
  explicit Traversal(const Hypergraph& g)
      : g_(g), node_num_(g.node_count(), kUnset), edge_num_(g.edge_count(), kUnset) {}

  std::string from_nodes(const std::vector<NodeIndex>& seeds) {
    for (NodeIndex v : seeds) number_node(v);
    return drain();
  }

  std::string from_edge(EdgeIndex e) {
    number_edge(e);
    return drain();
  }

  const std::vector<std::size_t>& node_numbers() const { return node_num_; }
  const std::vector<std::size_t>& edge_numbers() const { return edge_num_; }
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

 private:
  void number_node(NodeIndex v) {
    if (node_num_[v] != kUnset) return;
    node_num_[v] = next_node_++;
    queue_.push({true, v});
  }
  void number_edge(EdgeIndex e) {
    if (edge_num_[e] != kUnset) return;
    edge_num_[e] = next_edge_++;
    edges_in_order_.push_back(e);
    queue_.push({false, e});
  }

  std::string drain() {
    while (!queue_.empty()) {
      auto [is_node, x] = queue_.front();
      queue_.pop();
      if (is_node) {
        for (const Port& p : g_.in_ports(x)) number_edge(p.edge);
        for (const Port& p : g_.out_ports(x)) number_edge(p.edge);
      } else {
        for (NodeIndex v : g_.edge(x).sources) number_node(v);
        for (NodeIndex v : g_.edge(x).targets) number_node(v);
      }
    }
    std::string out;
    for (EdgeIndex e : edges_in_order_) {
      const Hyperedge& h = g_.edge(e);
      out += h.label;
      out += '(';
      for (NodeIndex v : h.sources) out += std::to_string(node_num_[v] - base_node_) + ",";
      out += '>';
      for (NodeIndex v : h.targets) out += std::to_string(node_num_[v] - base_node_) + ",";
      out += ')';
    }
    out += "#" + std::to_string(next_node_ - base_node_);
    edges_in_order_.clear();
    base_node_ = next_node_;
    return out;
  }

  const Hypergraph& g_;
  std::vector<std::size_t> node_num_;
  std::vector<std::size_t> edge_num_;
  std::vector<EdgeIndex> edges_in_order_;
  std::queue<std::pair<bool, std::size_t>> queue_;
  std::size_t next_node_ = 0;
  std::size_t next_edge_ = 0;
  std::size_t base_node_ = 0;
};

}  // namespace detail

// Interface-preserving isomorphism a -> b: inputs map to inputs and outputs to
// outputs positionally. Backtracking over edges, pruned by colour refinement.
inline std::optional<Morphism> find_isomorphism(const InterfacedHypergraph& a,
                                                const InterfacedHypergraph& b) {
  return detail::IsomorphismSearch(a, b).run();
}

inline std::optional<Morphism> find_isomorphism(const HypergraphPtr& a, const HypergraphPtr& b) {
  return find_isomorphism(InterfacedHypergraph{a, {}, {}}, InterfacedHypergraph{b, {}, {}});
}

inline bool isomorphic(const InterfacedHypergraph& a, const InterfacedHypergraph& b) {
  return find_isomorphism(a, b).has_value();
}

// Isomorphism-invariant key. For monogamous graphs it is an exact canonical
// form: elements are renamed by a forced traversal from the interface, and
// components not reachable from the interface are canonicalised separately and
// sorted. For other graphs it falls back to a colour-refinement digest, which
// is only a prefilter.
inline std::string canonical_form(const InterfacedHypergraph& h) {
  const Hypergraph& g = *h.graph;
  std::string key = "in" + std::to_string(h.inputs.size()) + "out" + std::to_string(h.outputs.size());
  if (!is_monogamous(g)) {
    auto c = detail::refine_colors(h);
    std::sort(c.node.begin(), c.node.end());
    std::sort(c.edge.begin(), c.edge.end());
    std::uint64_t x = 0;
    for (auto v : c.node) x = detail::mix(x, v);
    for (auto e : c.edge) x = detail::mix(x, e);
    return "~" + key + ":" + std::to_string(g.node_count()) + "/" + std::to_string(g.edge_count()) +
           ":" + std::to_string(x);
  }

  detail::Traversal main(g);
  std::vector<NodeIndex> seeds = h.inputs;
  seeds.insert(seeds.end(), h.outputs.begin(), h.outputs.end());
  key += "|" + main.from_nodes(seeds);
  {
    const auto& num = main.node_numbers();
    key += "|i";
    for (NodeIndex v : h.inputs) key += std::to_string(num[v]) + ",";
    key += "o";
    for (NodeIndex v : h.outputs) key += std::to_string(num[v]) + ",";
  }

  // Remaining components: canonical string is the least traversal over all
  // start edges of the component.
  std::vector<bool> done(g.edge_count(), false);
  for (EdgeIndex e = 0; e < g.edge_count(); ++e)
    if (main.edge_numbers()[e] != detail::Traversal::kUnset) done[e] = true;
  std::vector<std::string> components;
  std::size_t covered_nodes = 0;
  for (NodeIndex v = 0; v < g.node_count(); ++v)
    if (main.node_numbers()[v] != detail::Traversal::kUnset) ++covered_nodes;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (done[e]) continue;
    detail::Traversal probe(g);
    probe.from_edge(e);
    std::vector<EdgeIndex> members;
    for (EdgeIndex x = 0; x < g.edge_count(); ++x)
      if (probe.edge_numbers()[x] != detail::Traversal::kUnset) members.push_back(x);
    for (NodeIndex v = 0; v < g.node_count(); ++v)
      if (probe.node_numbers()[v] != detail::Traversal::kUnset) ++covered_nodes;
    std::string best;
    for (EdgeIndex start : members) {
      done[start] = true;
      detail::Traversal t(g);
      std::string s = t.from_edge(start);
      if (best.empty() || s < best) best = std::move(s);
    }
    components.push_back(std::move(best));
  }
  std::sort(components.begin(), components.end());
  for (const auto& c : components) key += "|c" + c;
  key += "|isolated" + std::to_string(g.node_count() - covered_nodes);
  return key;
}

}  // namespace dpoi
