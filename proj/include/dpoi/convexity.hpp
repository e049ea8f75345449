#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <vector>

#include "dpoi/hypergraph.hpp"

namespace dpoi {

// Returns a path (list of host edges) that starts and ends at nodes in the
// image of m but uses at least one edge outside the image, if one exists.
// Such a path witnesses that the image is not convex.
inline std::optional<std::vector<EdgeIndex>> convexity_violation(const Morphism& m) {
  const Hypergraph& g = *m.target;
  std::vector<bool> in_image_node(g.node_count(), false);
  std::vector<bool> in_image_edge(g.edge_count(), false);
  for (NodeIndex v : m.nodes) in_image_node[v] = true;
  for (EdgeIndex e : m.edges) in_image_edge[e] = true;

  constexpr EdgeIndex kNone = static_cast<EdgeIndex>(-1);

  // Forward search: edges reachable from image nodes, with the edge that led
  // to them (kNone for edges consuming an image node directly).
  std::vector<bool> fwd_seen(g.edge_count(), false);
  std::vector<EdgeIndex> fwd_parent(g.edge_count(), kNone);
  std::queue<EdgeIndex> queue;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (!in_image_node[v]) continue;
    for (const Port& p : g.out_ports(v))
      if (!fwd_seen[p.edge]) {
        fwd_seen[p.edge] = true;
        queue.push(p.edge);
      }
  }
  while (!queue.empty()) {
    const EdgeIndex e = queue.front();
    queue.pop();
    for (NodeIndex t : g.edge(e).targets)
      for (const Port& p : g.out_ports(t))
        if (!fwd_seen[p.edge]) {
          fwd_seen[p.edge] = true;
          fwd_parent[p.edge] = e;
          queue.push(p.edge);
        }
  }

  // Backward search: edges from which an image node is reachable, with the
  // next edge on the way there.
  std::vector<bool> bwd_seen(g.edge_count(), false);
  std::vector<EdgeIndex> bwd_next(g.edge_count(), kNone);
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (!in_image_node[v]) continue;
    for (const Port& p : g.in_ports(v))
      if (!bwd_seen[p.edge]) {
        bwd_seen[p.edge] = true;
        queue.push(p.edge);
      }
  }
  while (!queue.empty()) {
    const EdgeIndex e = queue.front();
    queue.pop();
    for (NodeIndex s : g.edge(e).sources)
      for (const Port& p : g.in_ports(s))
        if (!bwd_seen[p.edge]) {
          bwd_seen[p.edge] = true;
          bwd_next[p.edge] = e;
          queue.push(p.edge);
        }
  }

  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (in_image_edge[e] || !fwd_seen[e] || !bwd_seen[e]) continue;
    std::vector<EdgeIndex> path;
    for (EdgeIndex x = e; x != kNone; x = fwd_parent[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    for (EdgeIndex x = bwd_next[e]; x != kNone; x = bwd_next[x]) path.push_back(x);
    return path;
  }
  return std::nullopt;
}

// Mono, with a path-closed image.
inline bool is_convex_match(const Morphism& m) {
  return is_homomorphism(m) && is_mono(m) && !convexity_violation(m).has_value();
}

}  // namespace dpoi
