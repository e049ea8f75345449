// Loads a system, lists its essential critical pairs and checks each for
// joinability.
#include <iostream>

#include "dpoi/dpoi.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: sample_usage SYSTEM.json\n";
    return 64;
  }
  const dpoi::RewriteSystem sys = dpoi::load_system(argv[1]);
  for (const auto& v : dpoi::validate_system(sys))
    std::cout << "rule " << sys.rules[v.rule].name << " violates " << dpoi::to_string(v.violation) << "\n";

  dpoi::EnumerationOptions opts;
  opts.mode = dpoi::EnumerationMode::Essential;
  auto pairs = dpoi::dedup_up_to_iso(dpoi::collect_critical_pairs(sys, opts), dpoi::DedupMode::Symmetric);
  for (const auto& c : pairs) {
    auto [d1, d2] = dpoi::derive_pair(sys, c);
    auto join = dpoi::joinable(sys, d1.result, d2.result);
    std::cout << sys.rules[c.rule_i].name << " / " << sys.rules[c.rule_j].name << ": source has "
              << c.source.graph->edge_count() << " hyperedges, " << dpoi::to_string(join.status) << "\n";
  }
  return 0;
}
