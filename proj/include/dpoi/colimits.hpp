#pragma once

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dpoi/hypergraph.hpp"

namespace dpoi {

struct CoproductResult {
  HypergraphPtr graph;
  Morphism left;   // ι_1
  Morphism right;  // ι_2
};

struct QuotientResult {
  HypergraphPtr graph;
  Morphism quotient;  // surjective map onto the quotient graph
};

struct PushoutResult {
  HypergraphPtr graph;
  Morphism from_left;   // injection of f's codomain
  Morphism from_right;  // injection of g's codomain
};

struct PushoutComplementResult {
  HypergraphPtr context;
  Morphism interface_to_context;
  Morphism context_to_host;
};

namespace detail {

// Union-find whose roots are always the least member of their class.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline void require_same_signature(const Hypergraph& a, const Hypergraph& b) {
  if (a.signature_ptr() != b.signature_ptr() && !(a.signature() == b.signature()))
    throw Error("signature mismatch");
}

}  // namespace detail

// Disjoint union. Ids are tagged "L:" / "R:"; node and edge order is the left
// graph's order followed by the right graph's.
inline CoproductResult coproduct(const HypergraphPtr& a, const HypergraphPtr& b) {
  detail::require_same_signature(*a, *b);
  auto g = std::make_shared<Hypergraph>(a->signature_ptr());
  Morphism left{a, nullptr, {}, {}};
  Morphism right{b, nullptr, {}, {}};

  for (const auto& id : a->node_ids()) left.nodes.push_back(g->add_node("L:" + id));
  for (const auto& id : b->node_ids()) right.nodes.push_back(g->add_node("R:" + id));
  for (const auto& e : a->edges()) {
    std::vector<NodeIndex> s, t;
    for (NodeIndex v : e.sources) s.push_back(left.nodes[v]);
    for (NodeIndex v : e.targets) t.push_back(left.nodes[v]);
    left.edges.push_back(g->add_edge("L:" + e.id, e.label, std::move(s), std::move(t)));
  }
  for (const auto& e : b->edges()) {
    std::vector<NodeIndex> s, t;
    for (NodeIndex v : e.sources) s.push_back(right.nodes[v]);
    for (NodeIndex v : e.targets) t.push_back(right.nodes[v]);
    right.edges.push_back(g->add_edge("R:" + e.id, e.label, std::move(s), std::move(t)));
  }
  HypergraphPtr result = g;
  left.target = result;
  right.target = result;
  return {result, std::move(left), std::move(right)};
}

// Quotient of g by the smallest equivalence containing the given node and
// edge pairs, closed under positionwise merging of glued edges' endpoints.
// Each class is named after its least member and classes keep the order of
// their least members.
inline QuotientResult quotient(const HypergraphPtr& g,
                               const std::vector<std::pair<NodeIndex, NodeIndex>>& node_pairs,
                               const std::vector<std::pair<EdgeIndex, EdgeIndex>>& edge_pairs) {
  detail::UnionFind nodes(g->node_count());
  detail::UnionFind edges(g->edge_count());
  for (auto [x, y] : node_pairs) nodes.unite(x, y);
  for (auto [x, y] : edge_pairs) edges.unite(x, y);

  for (EdgeIndex e = 0; e < g->edge_count(); ++e) {
    const EdgeIndex r = edges.find(e);
    if (r == e) continue;
    const Hyperedge& a = g->edge(e);
    const Hyperedge& b = g->edge(r);
    if (a.label != b.label || a.sources.size() != b.sources.size() ||
        a.targets.size() != b.targets.size())
      throw Error("inconsistent gluing: edges '" + a.id + "' and '" + b.id +
                  "' have different labels or arities");
    for (std::size_t i = 0; i < a.sources.size(); ++i) nodes.unite(a.sources[i], b.sources[i]);
    for (std::size_t i = 0; i < a.targets.size(); ++i) nodes.unite(a.targets[i], b.targets[i]);
  }

  auto q = std::make_shared<Hypergraph>(g->signature_ptr());
  Morphism eps{g, nullptr, std::vector<NodeIndex>(g->node_count()),
               std::vector<EdgeIndex>(g->edge_count())};
  for (NodeIndex v = 0; v < g->node_count(); ++v) {
    const NodeIndex r = nodes.find(v);
    eps.nodes[v] = (r == v) ? q->add_node(g->node_id(v)) : eps.nodes[r];
  }
  for (EdgeIndex e = 0; e < g->edge_count(); ++e) {
    const EdgeIndex r = edges.find(e);
    if (r != e) {
      eps.edges[e] = eps.edges[r];
      continue;
    }
    const Hyperedge& x = g->edge(e);
    std::vector<NodeIndex> s, t;
    for (NodeIndex v : x.sources) s.push_back(eps.nodes[v]);
    for (NodeIndex v : x.targets) t.push_back(eps.nodes[v]);
    eps.edges[e] = q->add_edge(x.id, x.label, std::move(s), std::move(t));
  }
  HypergraphPtr result = q;
  eps.target = result;
  return {result, std::move(eps)};
}

// Coequalizer of parallel morphisms f, g : A -> B.
inline QuotientResult coequalizer(const Morphism& f, const Morphism& g) {
  if (f.source->node_count() != g.source->node_count() ||
      f.source->edge_count() != g.source->edge_count() ||
      f.target->node_count() != g.target->node_count() ||
      f.target->edge_count() != g.target->edge_count())
    throw Error("coequalizer: morphisms are not parallel");
  std::vector<std::pair<NodeIndex, NodeIndex>> np;
  std::vector<std::pair<EdgeIndex, EdgeIndex>> ep;
  for (NodeIndex v = 0; v < f.nodes.size(); ++v) np.emplace_back(f.nodes[v], g.nodes[v]);
  for (EdgeIndex e = 0; e < f.edges.size(); ++e) ep.emplace_back(f.edges[e], g.edges[e]);
  return quotient(f.target, np, ep);
}

// Pushout of the span B <-f- A -g-> C, computed as the coequalizer of
// f;ι_1 and g;ι_2 over B + C.
inline PushoutResult pushout(const Morphism& f, const Morphism& g) {
  if (f.source->node_count() != g.source->node_count() ||
      f.source->edge_count() != g.source->edge_count())
    throw Error("pushout: morphisms do not share a source");
  auto cp = coproduct(f.target, g.target);
  auto q = coequalizer(compose(f, cp.left), compose(g, cp.right));
  return {q.graph, compose(cp.left, q.quotient), compose(cp.right, q.quotient)};
}

// Given K -k2l-> L -l2g-> G with l2g mono, builds C with K -> C -> G so that
// the square is a pushout: C is G without the image of L minus the image of K.
inline PushoutComplementResult pushout_complement(const Morphism& k2l, const Morphism& l2g) {
  if (!is_mono(l2g)) throw Error("pushout complement: match is not mono");
  if (!k2l.source->is_discrete())
    throw Error("pushout complement: interface graph must be discrete");
  const Hypergraph& l = *l2g.source;
  const Hypergraph& g = *l2g.target;

  std::vector<bool> kept_in_l(l.node_count(), false);
  for (NodeIndex v : k2l.nodes) kept_in_l[v] = true;

  std::vector<bool> deleted_node(g.node_count(), false);
  std::vector<bool> deleted_edge(g.edge_count(), false);
  for (NodeIndex v = 0; v < l.node_count(); ++v)
    if (!kept_in_l[v]) deleted_node[l2g.nodes[v]] = true;
  for (EdgeIndex e : l2g.edges) deleted_edge[e] = true;

  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (deleted_edge[e]) continue;
    const Hyperedge& x = g.edge(e);
    auto dangles = [&](NodeIndex v) { return deleted_node[v]; };
    if (std::any_of(x.sources.begin(), x.sources.end(), dangles) ||
        std::any_of(x.targets.begin(), x.targets.end(), dangles))
      throw Error("no pushout complement: edge '" + x.id + "' would dangle");
  }

  auto c = std::make_shared<Hypergraph>(g.signature_ptr());
  Morphism c2g{nullptr, l2g.target, {}, {}};
  std::vector<NodeIndex> g2c(g.node_count(), 0);
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (deleted_node[v]) continue;
    g2c[v] = c->add_node(g.node_id(v));
    c2g.nodes.push_back(v);
  }
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (deleted_edge[e]) continue;
    const Hyperedge& x = g.edge(e);
    std::vector<NodeIndex> s, t;
    for (NodeIndex v : x.sources) s.push_back(g2c[v]);
    for (NodeIndex v : x.targets) t.push_back(g2c[v]);
    c->add_edge(x.id, x.label, std::move(s), std::move(t));
    c2g.edges.push_back(e);
  }
  HypergraphPtr context = c;
  c2g.source = context;

  Morphism k2c{k2l.source, context, {}, {}};
  for (NodeIndex v : k2l.nodes) k2c.nodes.push_back(g2c[l2g.nodes[v]]);
  return {context, std::move(k2c), std::move(c2g)};
}

}  // namespace dpoi
