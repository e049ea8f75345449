#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dpoi/colimits.hpp"
#include "dpoi/hypergraph.hpp"
#include "dpoi/independent_edge_sets.hpp"
#include "dpoi/isomorphism.hpp"
#include "dpoi/rewriting.hpp"

namespace dpoi {

using EdgePairs = IndependentEdgeSet<EdgeIndex, EdgeIndex>;
using NodePairs = IndependentEdgeSet<NodeIndex, NodeIndex>;

// Two parallel morphisms γ -> X whose coequalizer performs the gluing.
struct GluingScheme {
  HypergraphPtr gamma;
  Morphism proj1;
  Morphism proj2;
};

// A cp-cospan L_i + L_j ->> S <- in(S) + out(S), together with the two-stage
// gluing that produced it: first hyperedges (S_γ), then interface nodes.
struct CriticalPairCandidate {
  std::size_t rule_i = 0;
  std::size_t rule_j = 0;
  EdgePairs edge_scheme;  // (edge of L_i, edge of L_j)
  NodePairs node_scheme;  // pairs of nodes of the edge gluing S_γ
  HypergraphPtr coproduct;
  Morphism left_injection;   // L_i -> L_i + L_j
  Morphism right_injection;  // L_j -> L_i + L_j
  Morphism edge_gluing;      // L_i + L_j ->> S_γ
  Morphism node_gluing;      // S_γ ->> S
  InterfacedHypergraph source;
  Morphism epi;              // L_i + L_j ->> S
  Morphism match1;           // L_i -> S
  Morphism match2;           // L_j -> S
};

enum class CandidateRejection { NotMonogamous, Cyclic, NonInjectiveMatch };

inline std::string_view to_string(CandidateRejection r) {
  switch (r) {
    case CandidateRejection::NotMonogamous: return "not monogamous";
    case CandidateRejection::Cyclic: return "cyclic";
    case CandidateRejection::NonInjectiveMatch: return "non-injective match";
  }
  return "unknown";
}

// Data available after gluing hyperedges, before nodes are glued.
struct EdgeGluingInfo {
  std::size_t rule_i = 0;
  std::size_t rule_j = 0;
  const EdgePairs* edge_scheme = nullptr;
  HypergraphPtr graph;          // S_γ
  std::vector<NodeIndex> inputs_left, inputs_right;    // I_1, I_2
  std::vector<NodeIndex> outputs_left, outputs_right;  // O_1, O_2
};

// Optional hooks to observe the enumeration.
struct EnumerationObserver {
  std::function<void(const EdgeGluingInfo&)> on_edge_gluing;
  std::function<void(const CriticalPairCandidate&, CandidateRejection)> on_rejected;
};

enum class EnumerationMode { All, Essential };

// How the two node-gluing enumerations I_1×O_2 and I_2×O_1 are combined.
// Merged lists the empty scheme once; Disjoint keeps both copies.
enum class NodeSchemeUnion { Merged, Disjoint };

struct EnumerationOptions {
  EnumerationMode mode = EnumerationMode::All;
  bool suppress_mirrors = false;  // only i <= j
  NodeSchemeUnion node_union = NodeSchemeUnion::Merged;
  const EnumerationObserver* observer = nullptr;
};

// Hyperedge pairs of L_i × L_j induce γ: one hyperedge per pair and one node
// per positionwise source/target pair, projected into the coproduct.
inline GluingScheme induced_hypergraph(const CoproductResult& cp, const Hypergraph& li,
                                       const Hypergraph& lj, const EdgePairs& pairs) {
  auto gamma = std::make_shared<Hypergraph>(cp.graph->signature_ptr());
  std::vector<NodeIndex> p1_nodes, p2_nodes;
  std::vector<EdgeIndex> p1_edges, p2_edges;
  std::map<std::pair<NodeIndex, NodeIndex>, NodeIndex> node_of;
  auto node_for = [&](NodeIndex a, NodeIndex b) {
    auto [it, fresh] = node_of.try_emplace({a, b}, 0);
    if (fresh) {
      it->second = gamma->add_node("(" + li.node_id(a) + "," + lj.node_id(b) + ")");
      p1_nodes.push_back(cp.left.nodes[a]);
      p2_nodes.push_back(cp.right.nodes[b]);
    }
    return it->second;
  };
  for (auto [ea, eb] : pairs) {
    const Hyperedge& x = li.edge(ea);
    const Hyperedge& y = lj.edge(eb);
    if (x.label != y.label) throw Error("induced hypergraph: label mismatch in pair (" + x.id + "," + y.id + ")");
    std::vector<NodeIndex> s, t;
    for (std::size_t k = 0; k < x.sources.size(); ++k) s.push_back(node_for(x.sources[k], y.sources[k]));
    for (std::size_t k = 0; k < x.targets.size(); ++k) t.push_back(node_for(x.targets[k], y.targets[k]));
    gamma->add_edge("(" + x.id + "," + y.id + ")", x.label, std::move(s), std::move(t));
    p1_edges.push_back(cp.left.edges[ea]);
    p2_edges.push_back(cp.right.edges[eb]);
  }
  HypergraphPtr g = gamma;
  return {g, Morphism{g, cp.graph, std::move(p1_nodes), std::move(p1_edges)},
          Morphism{g, cp.graph, std::move(p2_nodes), std::move(p2_edges)}};
}

inline GluingScheme induced_hypergraph(const RewriteSystem& sys, std::size_t i, std::size_t j,
                                       const EdgePairs& pairs) {
  const auto& li = sys.rules.at(i).left.graph;
  const auto& lj = sys.rules.at(j).left.graph;
  return induced_hypergraph(coproduct(li, lj), *li, *lj, pairs);
}

// Node pairs of a graph X induce a discrete γ' with projections into X.
inline GluingScheme induced_node_scheme(const HypergraphPtr& x, const NodePairs& pairs) {
  auto gamma = std::make_shared<Hypergraph>(x->signature_ptr());
  std::vector<NodeIndex> p1, p2;
  for (auto [a, b] : pairs) {
    gamma->add_node("(" + x->node_id(a) + "," + x->node_id(b) + ")");
    p1.push_back(a);
    p2.push_back(b);
  }
  HypergraphPtr g = gamma;
  return {g, Morphism{g, x, std::move(p1), {}}, Morphism{g, x, std::move(p2), {}}};
}

namespace detail {

inline std::vector<NodeIndex> intersect_image(const std::vector<NodeIndex>& boundary,
                                              const std::vector<NodeIndex>& rule_boundary,
                                              const Morphism& into_gluing) {
  std::vector<bool> hit(into_gluing.target->node_count(), false);
  for (NodeIndex v : rule_boundary) hit[into_gluing.nodes[v]] = true;
  std::vector<NodeIndex> out;
  for (NodeIndex v : boundary)
    if (hit[v]) out.push_back(v);
  return out;
}

// Per-label independent edge sets between same-label hyperedges of L_i and
// L_j, in signature order.
inline std::vector<std::vector<EdgePairs>> per_label_edge_sets(const Signature& sig,
                                                               const Hypergraph& li,
                                                               const Hypergraph& lj) {
  std::vector<std::vector<EdgePairs>> out;
  for (const auto& entry : sig.entries()) {
    std::vector<EdgeIndex> a, b;
    for (EdgeIndex e = 0; e < li.edge_count(); ++e)
      if (li.edge(e).label == entry.label) a.push_back(e);
    for (EdgeIndex e = 0; e < lj.edge_count(); ++e)
      if (lj.edge(e).label == entry.label) b.push_back(e);
    if (a.empty() || b.empty()) continue;
    out.push_back(enumerate_independent_edge_sets(a, b));
  }
  return out;
}

}  // namespace detail

// Enumerates the candidates of one ordered rule pair (i, j) and passes each
// accepted one to `visit` in deterministic order: per-label scheme order
// (first label most significant), then node-scheme order.
template <class Visitor>
void enumerate_rule_pair(const RewriteSystem& sys, std::size_t i, std::size_t j,
                         const EnumerationOptions& opts, Visitor&& visit) {
  const HypergraphPtr& li = sys.rules.at(i).left.graph;
  const HypergraphPtr& lj = sys.rules.at(j).left.graph;
  const auto cp = coproduct(li, lj);
  const auto per_label = detail::per_label_edge_sets(*sys.signature, *li, *lj);
  const auto in_i = input_nodes(*li), in_j = input_nodes(*lj);
  const auto out_i = output_nodes(*li), out_j = output_nodes(*lj);

  std::vector<std::size_t> odometer(per_label.size(), 0);
  while (true) {
    EdgePairs scheme;
    for (std::size_t l = 0; l < per_label.size(); ++l) {
      const auto& chosen = per_label[l][odometer[l]];
      scheme.insert(scheme.end(), chosen.begin(), chosen.end());
    }

    if (!scheme.empty()) {
      const GluingScheme gs = induced_hypergraph(cp, *li, *lj, scheme);
      const QuotientResult edge_gluing = coequalizer(gs.proj1, gs.proj2);
      const HypergraphPtr& s_gamma = edge_gluing.graph;
      const Morphism into_left = compose(cp.left, edge_gluing.quotient);
      const Morphism into_right = compose(cp.right, edge_gluing.quotient);

      const auto ins = input_nodes(*s_gamma);
      const auto outs = output_nodes(*s_gamma);
      EdgeGluingInfo info{i, j, &scheme, s_gamma,
                          detail::intersect_image(ins, in_i, into_left),
                          detail::intersect_image(ins, in_j, into_right),
                          detail::intersect_image(outs, out_i, into_left),
                          detail::intersect_image(outs, out_j, into_right)};
      if (opts.observer && opts.observer->on_edge_gluing) opts.observer->on_edge_gluing(info);

      std::vector<NodePairs> node_schemes{NodePairs{}};
      if (opts.mode == EnumerationMode::All) {
        auto append = [&](IndependentEdgeSets<NodeIndex, NodeIndex> gen, bool first) {
          while (auto s = gen.next()) {
            if (s->empty() && (first || opts.node_union == NodeSchemeUnion::Merged)) continue;
            node_schemes.push_back(std::move(*s));
          }
        };
        append(IndependentEdgeSets<NodeIndex, NodeIndex>(info.inputs_left, info.outputs_right), true);
        append(IndependentEdgeSets<NodeIndex, NodeIndex>(info.inputs_right, info.outputs_left), false);
      }

      for (auto& node_scheme : node_schemes) {
        CriticalPairCandidate c;
        c.rule_i = i;
        c.rule_j = j;
        c.edge_scheme = scheme;
        c.coproduct = cp.graph;
        c.left_injection = cp.left;
        c.right_injection = cp.right;
        c.edge_gluing = edge_gluing.quotient;
        if (node_scheme.empty()) {
          c.node_gluing = identity_morphism(s_gamma);
        } else {
          const GluingScheme ns = induced_node_scheme(s_gamma, node_scheme);
          c.node_gluing = coequalizer(ns.proj1, ns.proj2).quotient;
        }
        c.node_scheme = std::move(node_scheme);
        c.epi = compose(c.edge_gluing, c.node_gluing);
        c.source = boundary_cospan(c.node_gluing.target);
        c.match1 = compose(cp.left, c.epi);
        c.match2 = compose(cp.right, c.epi);

        std::optional<CandidateRejection> rejection;
        const Hypergraph& s = *c.source.graph;
        if (!is_monogamous(s)) rejection = CandidateRejection::NotMonogamous;
        else if (!is_acyclic(s)) rejection = CandidateRejection::Cyclic;
        else if (!is_mono(c.match1) || !is_mono(c.match2)) rejection = CandidateRejection::NonInjectiveMatch;

        if (rejection) {
          if (opts.observer && opts.observer->on_rejected) opts.observer->on_rejected(c, *rejection);
          continue;
        }
        visit(std::move(c));
      }
    }

    // Odometer over the per-label choices, last label fastest.
    std::size_t l = per_label.size();
    while (l > 0) {
      --l;
      if (++odometer[l] < per_label[l].size()) break;
      odometer[l] = 0;
      if (l == 0) return;
    }
    if (per_label.empty()) return;
  }
}

inline std::vector<std::pair<std::size_t, std::size_t>> rule_pairs(const RewriteSystem& sys,
                                                                   bool suppress_mirrors) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < sys.rules.size(); ++i)
    for (std::size_t j = suppress_mirrors ? i : 0; j < sys.rules.size(); ++j) out.emplace_back(i, j);
  return out;
}

// Streams every candidate of the system to `visit`, ordered by (i, j, scheme).
template <class Visitor>
void enumerate_critical_pairs(const RewriteSystem& sys, const EnumerationOptions& opts, Visitor&& visit) {
  for (auto [i, j] : rule_pairs(sys, opts.suppress_mirrors)) enumerate_rule_pair(sys, i, j, opts, visit);
}

// Full enumeration: hyperedge gluing followed by input/output node gluing.
template <class Visitor>
void enumerate_all_critical_pairs(const RewriteSystem& sys, Visitor&& visit) {
  EnumerationOptions opts;
  opts.mode = EnumerationMode::All;
  enumerate_critical_pairs(sys, opts, std::forward<Visitor>(visit));
}

// Hyperedge gluings only; sufficient for deciding local confluence.
template <class Visitor>
void enumerate_essential_critical_pairs(const RewriteSystem& sys, Visitor&& visit) {
  EnumerationOptions opts;
  opts.mode = EnumerationMode::Essential;
  enumerate_critical_pairs(sys, opts, std::forward<Visitor>(visit));
}

// Materialises the stream, running rule pairs on up to `jobs` threads. The
// output order does not depend on `jobs`.
inline std::vector<CriticalPairCandidate> collect_critical_pairs(const RewriteSystem& sys,
                                                                 const EnumerationOptions& opts,
                                                                 std::size_t jobs = 1) {
  const auto pairs = rule_pairs(sys, opts.suppress_mirrors);
  std::vector<std::vector<CriticalPairCandidate>> buckets(pairs.size());
  auto work = [&](std::size_t k) {
    enumerate_rule_pair(sys, pairs[k].first, pairs[k].second, opts,
                        [&](CriticalPairCandidate c) { buckets[k].push_back(std::move(c)); });
  };
  // Observers are not synchronised, so they force a single thread.
  if (jobs <= 1 || pairs.size() <= 1 || opts.observer != nullptr) {
    for (std::size_t k = 0; k < pairs.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    const std::size_t n = std::min(jobs, pairs.size());
    for (std::size_t w = 0; w < n; ++w)
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < pairs.size(); k = next++) work(k);
      });
  }
  std::vector<CriticalPairCandidate> out;
  for (auto& b : buckets)
    for (auto& c : b) out.push_back(std::move(c));
  return out;
}

// Glued pairs read off the epi: elements of S with a preimage on both sides.
struct GluedElements {
  std::vector<std::pair<NodeIndex, NodeIndex>> nodes;  // (node of L_i, node of L_j)
  std::vector<std::pair<EdgeIndex, EdgeIndex>> edges;  // (edge of L_i, edge of L_j)
};

inline GluedElements glued_elements(const Morphism& match1, const Morphism& match2) {
  GluedElements out;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> node_from_left(match1.target->node_count(), kNone);
  std::vector<std::size_t> edge_from_left(match1.target->edge_count(), kNone);
  for (NodeIndex v = 0; v < match1.nodes.size(); ++v) node_from_left[match1.nodes[v]] = v;
  for (EdgeIndex e = 0; e < match1.edges.size(); ++e) edge_from_left[match1.edges[e]] = e;
  for (NodeIndex v = 0; v < match2.nodes.size(); ++v)
    if (node_from_left[match2.nodes[v]] != kNone) out.nodes.emplace_back(node_from_left[match2.nodes[v]], v);
  for (EdgeIndex e = 0; e < match2.edges.size(); ++e)
    if (edge_from_left[match2.edges[e]] != kNone) out.edges.emplace_back(edge_from_left[match2.edges[e]], e);
  std::sort(out.nodes.begin(), out.nodes.end());
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

// A pre-critical pair is parallel iff no hyperedges are glued and every glued
// node pair lies in the interfaces of both left-hand sides.
inline bool is_parallel(const RewriteSystem& sys, const CriticalPairCandidate& c) {
  const auto glued = glued_elements(c.match1, c.match2);
  if (!glued.edges.empty()) return false;
  auto in_interface = [](const InterfacedHypergraph& side, NodeIndex v) {
    return std::find(side.inputs.begin(), side.inputs.end(), v) != side.inputs.end() ||
           std::find(side.outputs.begin(), side.outputs.end(), v) != side.outputs.end();
  };
  const auto& li = sys.rules.at(c.rule_i).left;
  const auto& lj = sys.rules.at(c.rule_j).left;
  for (auto [a, b] : glued.nodes)
    if (!in_interface(li, a) || !in_interface(lj, b)) return false;
  return true;
}

// An isomorphism of the sources commuting with both matches. Since [m1, m2] is
// epi such a map is unique when it exists; it is read off the two epis.
inline std::optional<Morphism> cospan_isomorphism(const CriticalPairCandidate& a,
                                                  const CriticalPairCandidate& b) {
  if (a.rule_i != b.rule_i || a.rule_j != b.rule_j) return std::nullopt;
  const Hypergraph& sa = *a.source.graph;
  const Hypergraph& sb = *b.source.graph;
  if (sa.node_count() != sb.node_count() || sa.edge_count() != sb.edge_count()) return std::nullopt;
  if (a.epi.nodes.size() != b.epi.nodes.size() || a.epi.edges.size() != b.epi.edges.size())
    return std::nullopt;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  Morphism phi{a.source.graph, b.source.graph, std::vector<NodeIndex>(sa.node_count(), kNone),
               std::vector<EdgeIndex>(sa.edge_count(), kNone)};
  for (NodeIndex x = 0; x < a.epi.nodes.size(); ++x) {
    auto& slot = phi.nodes[a.epi.nodes[x]];
    if (slot != kNone && slot != b.epi.nodes[x]) return std::nullopt;
    slot = b.epi.nodes[x];
  }
  for (EdgeIndex x = 0; x < a.epi.edges.size(); ++x) {
    auto& slot = phi.edges[a.epi.edges[x]];
    if (slot != kNone && slot != b.epi.edges[x]) return std::nullopt;
    slot = b.epi.edges[x];
  }
  if (!is_homomorphism(phi) || !is_iso(phi)) return std::nullopt;
  return phi;
}

// An isomorphism S_a -> S_b with a1;phi = b1 and a2;phi = b2. The matches are
// jointly surjective, so phi is determined by them when it exists.
inline std::optional<Morphism> commuting_isomorphism(const HypergraphPtr& sa, const Morphism& a1,
                                                     const Morphism& a2, const HypergraphPtr& sb,
                                                     const Morphism& b1, const Morphism& b2) {
  if (sa->node_count() != sb->node_count() || sa->edge_count() != sb->edge_count()) return std::nullopt;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  Morphism phi{sa, sb, std::vector<NodeIndex>(sa->node_count(), kNone),
               std::vector<EdgeIndex>(sa->edge_count(), kNone)};
  auto push = [&](const Morphism& a, const Morphism& b) {
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
    for (NodeIndex x = 0; x < a.nodes.size(); ++x) {
      auto& slot = phi.nodes[a.nodes[x]];
      if (slot != kNone && slot != b.nodes[x]) return false;
      slot = b.nodes[x];
    }
    for (EdgeIndex x = 0; x < a.edges.size(); ++x) {
      auto& slot = phi.edges[a.edges[x]];
      if (slot != kNone && slot != b.edges[x]) return false;
      slot = b.edges[x];
    }
    return true;
  };
  if (!push(a1, b1) || !push(a2, b2)) return std::nullopt;
  if (!is_homomorphism(phi) || !is_iso(phi)) return std::nullopt;
  return phi;
}

// Both rules coincide and so do the matches: the two derivations are equal.
inline bool is_trivial_overlap(const CriticalPairCandidate& c) {
  return c.rule_i == c.rule_j && c.match1.nodes == c.match2.nodes && c.match1.edges == c.match2.edges;
}

enum class DedupMode {
  Strict,     // same (i, j) and an isomorphism of S commuting with both matches
  Symmetric,  // Strict, plus (j, i) mirrors identified and trivial self-overlaps dropped
};

inline std::string_view to_string(DedupMode m) { return m == DedupMode::Strict ? "strict" : "symmetric"; }

// Keeps the first candidate of each class of equivalent cp-cospans, in input
// order. Buckets by (rules, canonical form of S) before the exact check.
inline std::vector<CriticalPairCandidate> dedup_up_to_iso(std::vector<CriticalPairCandidate> pairs,
                                                          DedupMode mode = DedupMode::Strict) {
  std::map<std::tuple<std::size_t, std::size_t, std::string>, std::vector<std::size_t>> buckets;
  std::vector<CriticalPairCandidate> out;
  auto equivalent = [&](const CriticalPairCandidate& a, const CriticalPairCandidate& c) {
    if (a.rule_i == c.rule_i && a.rule_j == c.rule_j &&
        commuting_isomorphism(a.source.graph, a.match1, a.match2, c.source.graph, c.match1, c.match2))
      return true;
    return mode == DedupMode::Symmetric && a.rule_i == c.rule_j && a.rule_j == c.rule_i &&
           commuting_isomorphism(a.source.graph, a.match1, a.match2, c.source.graph, c.match2, c.match1)
               .has_value();
  };
  for (auto& c : pairs) {
    if (mode == DedupMode::Symmetric && is_trivial_overlap(c)) continue;
    auto lo = c.rule_i, hi = c.rule_j;
    if (mode == DedupMode::Symmetric && hi < lo) std::swap(lo, hi);
    // Mirrors list the interface of S in another order, so only the bare graph is keyed.
    const std::string key = mode == DedupMode::Symmetric ? canonical_form(InterfacedHypergraph{c.source.graph, {}, {}})
                                                         : canonical_form(c.source);
    auto& bucket = buckets[{lo, hi, key}];
    const bool seen =
        std::any_of(bucket.begin(), bucket.end(), [&](std::size_t k) { return equivalent(out[k], c); });
    if (seen) continue;
    bucket.push_back(out.size());
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace dpoi
