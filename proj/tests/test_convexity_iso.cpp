#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>

#include "support/brute_force.hpp"
#include "support/fixtures.hpp"
#include "support/random_systems.hpp"

using namespace dpoi;
using fixtures::graph;

namespace {

// Convexity by path enumeration: every directed path between two image nodes
// visits only image nodes and image edges.
bool convex_by_paths(const Morphism& m) {
  const Hypergraph& g = *m.target;
  std::vector<bool> node_in(g.node_count(), false), edge_in(g.edge_count(), false);
  for (NodeIndex v : m.nodes) node_in[v] = true;
  for (EdgeIndex e : m.edges) edge_in[e] = true;
  bool ok = true;
  // Walk from each image node; `outside` records whether the walk left the image.
  std::function<void(NodeIndex, bool, std::vector<bool>&)> walk = [&](NodeIndex v, bool outside,
                                                                       std::vector<bool>& on_path) {
    for (auto [e, pos] : g.out_ports(v)) {
      for (NodeIndex t : g.edge(e).targets) {
        if (on_path[t]) continue;
        const bool out_now = outside || !edge_in[e];
        if (node_in[t] && out_now) ok = false;
        on_path[t] = true;
        walk(t, out_now || !node_in[t], on_path);
        on_path[t] = false;
      }
    }
  };
  for (NodeIndex v : m.nodes) {
    std::vector<bool> on_path(g.node_count(), false);
    on_path[v] = true;
    walk(v, false, on_path);
  }
  return ok;
}

InterfacedHypergraph shuffled_copy(const InterfacedHypergraph& h, std::mt19937& rng) {
  const Hypergraph& g = *h.graph;
  std::vector<NodeIndex> perm(g.node_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<NodeIndex> where(g.node_count());
  auto c = std::make_shared<Hypergraph>(g.signature_ptr());
  for (std::size_t k = 0; k < perm.size(); ++k) where[perm[k]] = c->add_node("z" + std::to_string(k));
  std::vector<EdgeIndex> order(g.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (EdgeIndex e : order) {
    const auto& x = g.edge(e);
    std::vector<NodeIndex> s, t;
    for (NodeIndex v : x.sources) s.push_back(where[v]);
    for (NodeIndex v : x.targets) t.push_back(where[v]);
    c->add_edge("q" + std::to_string(e), x.label, s, t);
  }
  InterfacedHypergraph out{c, {}, {}};
  for (NodeIndex v : h.inputs) out.inputs.push_back(where[v]);
  for (NodeIndex v : h.outputs) out.outputs.push_back(where[v]);
  return out;
}

}  // namespace

TEST(Convexity, NonConvexMatchHasWitnessPath) {
  auto sig = fixtures::monoid_signature();
  // x -mu-> m -mu-> r with a second path x' -> m through the inner product.
  auto host = fixtures::left_nested_product(sig);
  auto pattern = graph(sig, {"a", "b"}, {});
  Morphism m{pattern, host.graph, {0, 4}, {}};  // x and r, path x -> m -> r leaves the image
  auto witness = convexity_violation(m);
  ASSERT_TRUE(witness.has_value());
  EXPECT_EQ(witness->size(), 2u);
  EXPECT_FALSE(is_convex_match(m));

  Morphism whole = identity_morphism(host.graph);
  EXPECT_TRUE(is_convex_match(whole));
}

TEST(Convexity, AgreesWithPathEnumerationOnRandomMatches) {
  std::mt19937 rng(3);
  auto sig = gen::random_signature();
  std::size_t checked = 0, non_convex = 0;
  for (int round = 0; round < 100; ++round) {
    auto host = gen::random_left_side(sig, rng, 4);
    if (!host.graph) continue;
    const Hypergraph& h = *host.graph;
    // Every edge subset with its incident nodes, included into the host.
    for (std::size_t mask = 1; mask < (std::size_t{1} << h.edge_count()); ++mask) {
      auto pat = std::make_shared<Hypergraph>(sig);
      Morphism m{pat, host.graph, {}, {}};
      std::vector<NodeIndex> where(h.node_count(), h.node_count());
      auto node = [&](NodeIndex v) {
        if (where[v] == h.node_count()) {
          where[v] = pat->add_node(h.node_id(v));
          m.nodes.push_back(v);
        }
        return where[v];
      };
      for (EdgeIndex e = 0; e < h.edge_count(); ++e) {
        if (!(mask >> e & 1)) continue;
        const auto& x = h.edge(e);
        std::vector<NodeIndex> s, t;
        for (NodeIndex v : x.sources) s.push_back(node(v));
        for (NodeIndex v : x.targets) t.push_back(node(v));
        pat->add_edge(x.id, x.label, s, t);
        m.edges.push_back(e);
      }
      const bool expected = convex_by_paths(m);
      ASSERT_EQ(is_convex_match(m), expected);
      ++checked;
      non_convex += !expected;
    }
  }
  EXPECT_GT(checked, 20u);
  EXPECT_GT(non_convex, 0u);
}

TEST(Isomorphism, ShuffledCopiesAreIsomorphicWithEqualCanonicalForms) {
  std::mt19937 rng(5);
  auto sig = gen::random_signature();
  for (int round = 0; round < 200; ++round) {
    auto h = gen::random_left_side(sig, rng, 5);
    if (!h.graph) continue;
    auto c = shuffled_copy(h, rng);
    auto iso = find_isomorphism(h, c);
    ASSERT_TRUE(iso.has_value());
    EXPECT_TRUE(is_homomorphism(*iso));
    EXPECT_TRUE(is_iso(*iso));
    for (std::size_t k = 0; k < h.inputs.size(); ++k) EXPECT_EQ(iso->nodes[h.inputs[k]], c.inputs[k]);
    EXPECT_EQ(canonical_form(h), canonical_form(c));
    EXPECT_TRUE(isomorphic(c, h));
  }
}

TEST(Isomorphism, InterfaceOrderMatters) {
  auto sig = fixtures::monoid_signature();
  auto a = fixtures::left_nested_product(sig);
  auto b = a;
  std::swap(b.inputs[0], b.inputs[2]);
  EXPECT_TRUE(find_isomorphism(a.graph, b.graph).has_value());
  EXPECT_FALSE(isomorphic(a, b));
  EXPECT_NE(canonical_form(a), canonical_form(b));
}

TEST(Isomorphism, EquivalenceOnRandomGraphs) {
  std::mt19937 rng(9);
  auto sig = gen::random_signature();
  std::vector<InterfacedHypergraph> pool;
  for (int k = 0; pool.size() < 40 && k < 1000; ++k)
    if (auto h = gen::random_left_side(sig, rng, 3); h.graph) pool.push_back(h);
  for (const auto& a : pool) {
    EXPECT_TRUE(isomorphic(a, a));
    for (const auto& b : pool) {
      const bool ab = isomorphic(a, b);
      EXPECT_EQ(ab, isomorphic(b, a));
      // Canonical forms decide isomorphism on monogamous graphs.
      EXPECT_EQ(ab, canonical_form(a) == canonical_form(b));
    }
  }
}

TEST(Isomorphism, ClosedComponentsAreCompared) {
  auto sig = fixtures::monoid_signature();
  auto one = graph(sig, {"a"}, {{"u", "eta", {}, {"a"}}, {"k", "epsilon", {"a"}, {}}});
  auto two = graph(sig, {"a", "b"},
                   {{"u", "eta", {}, {"a"}}, {"k", "epsilon", {"a"}, {}}, {"v", "eta", {}, {"b"}}, {"w", "epsilon", {"b"}, {}}});
  InterfacedHypergraph h1{one, {}, {}}, h2{two, {}, {}};
  EXPECT_FALSE(isomorphic(h1, h2));
  EXPECT_NE(canonical_form(h1), canonical_form(h2));
}
