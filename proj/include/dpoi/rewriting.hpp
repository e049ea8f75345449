#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dpoi/colimits.hpp"
#include "dpoi/hypergraph.hpp"
#include "dpoi/isomorphism.hpp"

namespace dpoi {

// A span L <- I+O -> R. The interface I+O is implicit: the i-th input of
// `left` corresponds to the i-th input of `right`, likewise for outputs.
struct RewriteRule {
  std::string name;
  InterfacedHypergraph left;
  InterfacedHypergraph right;
};

struct RewriteSystem {
  SignaturePtr signature;
  std::vector<RewriteRule> rules;
};

enum class RuleViolation { Arity, MaLeft, MaRight, MonoInterface, StrongConnectivity, Signature };

inline std::string_view to_string(RuleViolation v) {
  switch (v) {
    case RuleViolation::Arity: return "arity";
    case RuleViolation::MaLeft: return "ma-left";
    case RuleViolation::MaRight: return "ma-right";
    case RuleViolation::MonoInterface: return "mono-interface";
    case RuleViolation::StrongConnectivity: return "strong-connectivity";
    case RuleViolation::Signature: return "signature";
  }
  return "unknown";
}

// Empty iff the rule is left-connected: both sides are ma-cospans over a
// shared interface, [i_L, o_L] is mono and L is strongly connected.
inline std::vector<RuleViolation> validate_rule(const RewriteRule& r) {
  std::vector<RuleViolation> out;
  if (r.left.inputs.size() != r.right.inputs.size() ||
      r.left.outputs.size() != r.right.outputs.size())
    out.push_back(RuleViolation::Arity);

  const Hypergraph& l = *r.left.graph;
  const bool left_ma = is_monogamous_acyclic(l) &&
                       detail::same_set(r.left.inputs, input_nodes(l)) &&
                       detail::same_set(r.left.outputs, output_nodes(l));
  if (!left_ma) out.push_back(RuleViolation::MaLeft);
  if (!is_ma_cospan(r.right)) out.push_back(RuleViolation::MaRight);

  std::vector<NodeIndex> boundary = r.left.inputs;
  boundary.insert(boundary.end(), r.left.outputs.begin(), r.left.outputs.end());
  if (!detail::distinct(boundary)) out.push_back(RuleViolation::MonoInterface);

  if (left_ma && !is_strongly_connected(l)) out.push_back(RuleViolation::StrongConnectivity);
  return out;
}

struct SystemViolation {
  std::size_t rule;
  RuleViolation violation;
};

inline std::vector<SystemViolation> validate_system(const RewriteSystem& sys) {
  std::vector<SystemViolation> out;
  for (std::size_t i = 0; i < sys.rules.size(); ++i) {
    const auto& r = sys.rules[i];
    if (!(r.left.graph->signature() == *sys.signature) ||
        !(r.right.graph->signature() == *sys.signature))
      out.push_back({i, RuleViolation::Signature});
    for (auto v : validate_rule(r)) out.push_back({i, v});
  }
  return out;
}

// The discrete interface graph I+O, with nodes "in<k>" then "out<k>".
inline HypergraphPtr interface_graph(const RewriteRule& r) {
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < r.left.inputs.size(); ++k) ids.push_back("in" + std::to_string(k));
  for (std::size_t k = 0; k < r.left.outputs.size(); ++k) ids.push_back("out" + std::to_string(k));
  return discrete_graph(r.left.graph->signature_ptr(), ids);
}

inline Morphism interface_embedding(const HypergraphPtr& k, const InterfacedHypergraph& side) {
  Morphism m{k, side.graph, side.inputs, {}};
  m.nodes.insert(m.nodes.end(), side.outputs.begin(), side.outputs.end());
  return m;
}

namespace detail {

class MatchSearch {
 public:
  MatchSearch(const HypergraphPtr& l, const HypergraphPtr& g)
      : l_(l), g_(g), node_map_(l->node_count(), kUnset), node_used_(g->node_count(), false),
        edge_map_(l->edge_count(), kUnset), edge_used_(g->edge_count(), false) {
    for (NodeIndex v = 0; v < l->node_count(); ++v)
      if (l->in_ports(v).empty() && l->out_ports(v).empty()) isolated_.push_back(v);
  }

  std::vector<Morphism> run() {
    edges(0);
    return std::move(found_);
  }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  bool bind(NodeIndex x, NodeIndex y, std::vector<NodeIndex>& undo) {
    if (node_map_[x] != kUnset) return node_map_[x] == y;
    if (node_used_[y]) return false;
    node_map_[x] = y;
    node_used_[y] = true;
    undo.push_back(x);
    return true;
  }

  void unbind(std::vector<NodeIndex>& undo) {
    for (NodeIndex x : undo) {
      node_used_[node_map_[x]] = false;
      node_map_[x] = kUnset;
    }
    undo.clear();
  }

  void edges(EdgeIndex k) {
    if (k == l_->edge_count()) {
      nodes(0);
      return;
    }
    const Hyperedge& x = l_->edge(k);
    for (EdgeIndex e = 0; e < g_->edge_count(); ++e) {
      if (edge_used_[e]) continue;
      const Hyperedge& y = g_->edge(e);
      if (y.label != x.label) continue;
      std::vector<NodeIndex> undo;
      bool ok = true;
      for (std::size_t i = 0; ok && i < x.sources.size(); ++i) ok = bind(x.sources[i], y.sources[i], undo);
      for (std::size_t i = 0; ok && i < x.targets.size(); ++i) ok = bind(x.targets[i], y.targets[i], undo);
      if (ok) {
        edge_map_[k] = e;
        edge_used_[e] = true;
        edges(k + 1);
        edge_used_[e] = false;
        edge_map_[k] = kUnset;
      }
      unbind(undo);
    }
  }

  void nodes(std::size_t k) {
    if (k == isolated_.size()) {
      found_.push_back(Morphism{l_, g_, node_map_, edge_map_});
      return;
    }
    const NodeIndex x = isolated_[k];
    for (NodeIndex y = 0; y < g_->node_count(); ++y) {
      if (node_used_[y]) continue;
      node_map_[x] = y;
      node_used_[y] = true;
      nodes(k + 1);
      node_used_[y] = false;
      node_map_[x] = kUnset;
    }
  }

  HypergraphPtr l_, g_;
  std::vector<NodeIndex> node_map_;
  std::vector<bool> node_used_;
  std::vector<EdgeIndex> edge_map_;
  std::vector<bool> edge_used_;
  std::vector<NodeIndex> isolated_;
  std::vector<Morphism> found_;
};

}  // namespace detail

// All mono morphisms l -> g, edge-first, in lexicographic order of the edge
// assignment (host edge order). For left-connected rules into ma hosts these
// are exactly the convex matches.
inline std::vector<Morphism> enumerate_matches(const HypergraphPtr& l, const HypergraphPtr& g) {
  detail::require_same_signature(*l, *g);
  return detail::MatchSearch(l, g).run();
}

struct Derivation {
  InterfacedHypergraph source;  // G
  std::size_t rule_index = 0;
  Morphism match;                // L -> G
  HypergraphPtr interface;       // K = I+O
  HypergraphPtr context;         // C
  Morphism interface_to_context;
  Morphism context_to_source;
  Morphism context_to_result;
  Morphism rhs_to_result;
  InterfacedHypergraph result;   // H
};

namespace detail {

// Renames the pushout C +_K R: elements coming from C keep C's ids, the others
// get fresh ids not used by C.
inline PushoutResult rename_rewrite_result(const PushoutResult& po, const Hypergraph& context) {
  const Hypergraph& h = *po.graph;
  std::vector<std::string> node_names(h.node_count());
  std::vector<std::string> edge_names(h.edge_count());
  std::vector<bool> node_named(h.node_count(), false), edge_named(h.edge_count(), false);
  for (NodeIndex v = 0; v < po.from_left.nodes.size(); ++v) {
    const NodeIndex w = po.from_left.nodes[v];
    if (!node_named[w]) {
      node_named[w] = true;
      node_names[w] = context.node_id(v);
    }
  }
  for (EdgeIndex e = 0; e < po.from_left.edges.size(); ++e) {
    const EdgeIndex f = po.from_left.edges[e];
    edge_named[f] = true;
    edge_names[f] = context.edge(e).id;
  }
  std::set<std::string> taken(context.node_ids().begin(), context.node_ids().end());
  for (const auto& e : context.edges()) taken.insert(e.id);
  std::size_t counter = context.node_count() + context.edge_count();
  auto fresh = [&](char prefix) {
    std::string id;
    do {
      id = std::string(1, prefix) + std::to_string(counter++);
    } while (taken.contains(id));
    taken.insert(id);
    return id;
  };
  for (NodeIndex v = 0; v < h.node_count(); ++v)
    if (!node_named[v]) node_names[v] = fresh('n');
  for (EdgeIndex e = 0; e < h.edge_count(); ++e)
    if (!edge_named[e]) edge_names[e] = fresh('e');

  auto renamed = std::make_shared<Hypergraph>(h.signature_ptr());
  for (const auto& n : node_names) renamed->add_node(n);
  for (EdgeIndex e = 0; e < h.edge_count(); ++e)
    renamed->add_edge(edge_names[e], h.edge(e).label, h.edge(e).sources, h.edge(e).targets);
  HypergraphPtr out = renamed;
  PushoutResult r = po;
  r.graph = out;
  r.from_left.target = out;
  r.from_right.target = out;
  return r;
}

}  // namespace detail

// One convex DPOI rewrite step of g with rule r at `match`. The context is the
// unique pushout complement; the result is the pushout of C <- I+O -> R, with
// g's interface carried through C.
inline Derivation rewrite_step(const InterfacedHypergraph& g, const RewriteRule& r,
                               const Morphism& match, std::size_t rule_index = 0) {
  if (!is_homomorphism(match) || match.target->node_count() != g.graph->node_count())
    throw Error("rewrite_step: match is not a morphism into the host");
  const HypergraphPtr k = interface_graph(r);
  const Morphism k2l = interface_embedding(k, r.left);
  const Morphism k2r = interface_embedding(k, r.right);

  auto pc = pushout_complement(k2l, match);

  std::vector<NodeIndex> host_to_context(g.graph->node_count(), static_cast<NodeIndex>(-1));
  for (NodeIndex c = 0; c < pc.context_to_host.nodes.size(); ++c)
    host_to_context[pc.context_to_host.nodes[c]] = c;

  auto po = detail::rename_rewrite_result(pushout(pc.interface_to_context, k2r), *pc.context);

  InterfacedHypergraph result{po.graph, {}, {}};
  for (NodeIndex v : g.inputs) {
    if (host_to_context[v] == static_cast<NodeIndex>(-1))
      throw Error("rewrite_step: match deletes an interface node of the host");
    result.inputs.push_back(po.from_left.nodes[host_to_context[v]]);
  }
  for (NodeIndex v : g.outputs) {
    if (host_to_context[v] == static_cast<NodeIndex>(-1))
      throw Error("rewrite_step: match deletes an interface node of the host");
    result.outputs.push_back(po.from_left.nodes[host_to_context[v]]);
  }
  if (is_ma_cospan(g) && !is_ma_cospan(result))
    throw Error("rewrite_step: result is not monogamous acyclic");

  return Derivation{g,
                    rule_index,
                    match,
                    k,
                    pc.context,
                    std::move(pc.interface_to_context),
                    std::move(pc.context_to_host),
                    std::move(po.from_left),
                    std::move(po.from_right),
                    std::move(result)};
}

inline Derivation rewrite_step(const InterfacedHypergraph& g, const RewriteSystem& sys,
                               std::size_t rule_index, const Morphism& match) {
  return rewrite_step(g, sys.rules.at(rule_index), match, rule_index);
}

// All one-step rewrites of g, ordered by (rule index, match order).
inline std::vector<Derivation> all_rewrites(const InterfacedHypergraph& g, const RewriteSystem& sys) {
  std::vector<Derivation> out;
  for (std::size_t i = 0; i < sys.rules.size(); ++i)
    for (const auto& m : enumerate_matches(sys.rules[i].left.graph, g.graph))
      out.push_back(rewrite_step(g, sys.rules[i], m, i));
  return out;
}

// Rebuilds both squares of a derivation by pushout and compares with the
// stored corners: pushout(C <- K -> L) must be G and pushout(C <- K -> R)
// must be H, each up to an isomorphism that respects the host interface.
inline bool derivation_squares_commute(const Derivation& d, const RewriteRule& r) {
  const Morphism k2l = interface_embedding(d.interface, r.left);
  const Morphism k2r = interface_embedding(d.interface, r.right);

  auto carry = [&](const PushoutResult& po, const InterfacedHypergraph& original) {
    std::vector<NodeIndex> to_context(d.source.graph->node_count(), static_cast<NodeIndex>(-1));
    for (NodeIndex c = 0; c < d.context_to_source.nodes.size(); ++c)
      to_context[d.context_to_source.nodes[c]] = c;
    InterfacedHypergraph out{po.graph, {}, {}};
    for (NodeIndex v : original.inputs) out.inputs.push_back(po.from_left.nodes[to_context[v]]);
    for (NodeIndex v : original.outputs) out.outputs.push_back(po.from_left.nodes[to_context[v]]);
    return out;
  };

  const auto left_square = pushout(d.interface_to_context, k2l);
  if (!isomorphic(carry(left_square, d.source), d.source)) return false;
  const auto right_square = pushout(d.interface_to_context, k2r);
  return isomorphic(carry(right_square, d.source), d.result);
}

}  // namespace dpoi
