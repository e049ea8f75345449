#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "dpoi/critical_pairs.hpp"
#include "dpoi/hypergraph.hpp"
#include "dpoi/rewriting.hpp"

namespace dpoi {

// Optional per-element colours; empty strings mean default.
struct DotColours {
  std::vector<std::string> nodes;
  std::vector<std::string> edges;
};

namespace detail {
inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace detail

// Nodes are points, hyperedges are labelled boxes; tails and heads carry the
// port position. Interface nodes are linked to numbered in/out markers.
inline std::string to_dot(const InterfacedHypergraph& h, const std::string& name,
                          const DotColours* colours = nullptr) {
  const Hypergraph& g = *h.graph;
  auto colour_of = [](const std::vector<std::string>& v, std::size_t k) -> std::string {
    return k < v.size() ? v[k] : std::string();
  };
  std::ostringstream out;
  out << "digraph \"" << detail::dot_escape(name) << "\" {\n";
  out << "  rankdir=LR;\n";
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    out << "  n" << v << " [shape=point, xlabel=\"" << detail::dot_escape(g.node_id(v)) << "\"";
    if (colours) {
      auto c = colour_of(colours->nodes, v);
      if (!c.empty()) out << ", color=\"" << c << "\"";
    }
    out << "];\n";
  }
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const Hyperedge& x = g.edge(e);
    out << "  e" << e << " [shape=box, label=\"" << detail::dot_escape(x.label) << "\", tooltip=\""
        << detail::dot_escape(x.id) << "\"";
    if (colours) {
      auto c = colour_of(colours->edges, e);
      if (!c.empty()) out << ", color=\"" << c << "\", fontcolor=\"" << c << "\"";
    }
    out << "];\n";
    for (std::size_t k = 0; k < x.sources.size(); ++k)
      out << "  n" << x.sources[k] << " -> e" << e << " [arrowhead=none, headlabel=\"" << k << "\"];\n";
    for (std::size_t k = 0; k < x.targets.size(); ++k)
      out << "  e" << e << " -> n" << x.targets[k] << " [taillabel=\"" << k << "\"];\n";
  }
  for (std::size_t k = 0; k < h.inputs.size(); ++k)
    out << "  in" << k << " [shape=plaintext, label=\"in " << k << "\"];\n  in" << k << " -> n" << h.inputs[k]
        << " [style=dashed];\n";
  for (std::size_t k = 0; k < h.outputs.size(); ++k)
    out << "  out" << k << " [shape=plaintext, label=\"out " << k << "\"];\n  n" << h.outputs[k] << " -> out"
        << k << " [style=dashed];\n";
  out << "}\n";
  return out.str();
}

inline std::string rule_to_dot(const RewriteRule& r) {
  return to_dot(r.left, r.name + " (left)") + to_dot(r.right, r.name + " (right)");
}

// Source of a critical pair with the image of match1 in red, match2 in blue
// and their overlap in purple.
inline std::string to_dot(const RewriteSystem& sys, const CriticalPairCandidate& c, const std::string& name) {
  const Hypergraph& s = *c.source.graph;
  std::vector<int> node_mask(s.node_count(), 0), edge_mask(s.edge_count(), 0);
  for (NodeIndex v : c.match1.nodes) node_mask[v] |= 1;
  for (NodeIndex v : c.match2.nodes) node_mask[v] |= 2;
  for (EdgeIndex e : c.match1.edges) edge_mask[e] |= 1;
  for (EdgeIndex e : c.match2.edges) edge_mask[e] |= 2;
  static const char* palette[] = {"", "red", "blue", "purple"};
  DotColours colours;
  for (int m : node_mask) colours.nodes.emplace_back(palette[m]);
  for (int m : edge_mask) colours.edges.emplace_back(palette[m]);
  const std::string title = name + ": " + sys.rules.at(c.rule_i).name + " / " + sys.rules.at(c.rule_j).name;
  return to_dot(c.source, title, &colours);
}

}  // namespace dpoi
