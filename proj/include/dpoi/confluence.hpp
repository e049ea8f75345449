#pragma once

#include <algorithm>
#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dpoi/critical_pairs.hpp"
#include "dpoi/isomorphism.hpp"
#include "dpoi/rewriting.hpp"

namespace dpoi {

// Applies rule i at match1 and rule j at match2 to the common source.
inline std::pair<Derivation, Derivation> derive_pair(const RewriteSystem& sys,
                                                     const CriticalPairCandidate& c) {
  return {rewrite_step(c.source, sys, c.rule_i, c.match1), rewrite_step(c.source, sys, c.rule_j, c.match2)};
}

struct JoinOptions {
  std::size_t max_depth = 5;
  std::size_t max_states = 10000;  // per side
};

enum class JoinStatus {
  Joinable,
  NotJoinable,        // both closures were exhausted without meeting
  NotJoinableWithin,  // depth or state bound reached first
};

inline std::string_view to_string(JoinStatus s) {
  switch (s) {
    case JoinStatus::Joinable: return "joinable";
    case JoinStatus::NotJoinable: return "not_joinable";
    case JoinStatus::NotJoinableWithin: return "not_joinable_within";
  }
  return "unknown";
}

struct JoinResult {
  JoinStatus status = JoinStatus::NotJoinableWithin;
  std::size_t depth = 0;  // steps on the longer witness side, or the depth explored
  std::vector<Derivation> left_witness;
  std::vector<Derivation> right_witness;
  bool state_overflow = false;
};

namespace detail {

class Closure {
 public:
  struct State {
    InterfacedHypergraph graph;
    std::optional<std::size_t> parent;
    std::optional<Derivation> via;
    std::string key;
  };

  explicit Closure(InterfacedHypergraph root) {
    std::string key = canonical_form(root);
    index_[key].push_back(0);
    states_.push_back({std::move(root), std::nullopt, std::nullopt, std::move(key)});
    frontier_end_ = 1;
  }

  std::optional<std::size_t> find(const InterfacedHypergraph& g, const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    for (std::size_t k : it->second)
      if (isomorphic(states_[k].graph, g)) return k;
    return std::nullopt;
  }

  // Expands the current frontier by one rewrite step. `on_new` is called for
  // each new state and may stop the expansion by returning true.
  template <class OnNew>
  bool expand(const RewriteSystem& sys, std::size_t max_states, bool& overflow, OnNew&& on_new) {
    const std::size_t begin = frontier_begin_, end = frontier_end_;
    for (std::size_t k = begin; k < end; ++k) {
      for (auto& d : all_rewrites(states_[k].graph, sys)) {
        std::string key = canonical_form(d.result);
        if (find(d.result, key)) continue;
        if (states_.size() >= max_states) {
          overflow = true;
          return false;
        }
        InterfacedHypergraph g = d.result;
        index_[key].push_back(states_.size());
        states_.push_back({std::move(g), k, std::move(d), std::move(key)});
        if (on_new(states_.size() - 1)) return true;
      }
    }
    frontier_begin_ = end;
    frontier_end_ = states_.size();
    return false;
  }

  bool exhausted() const { return frontier_begin_ == frontier_end_; }
  const State& state(std::size_t k) const { return states_[k]; }

  std::vector<Derivation> path_to(std::size_t k) const {
    std::vector<Derivation> out;
    for (std::size_t at = k; states_[at].parent; at = *states_[at].parent) out.push_back(*states_[at].via);
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<State> states_;
  std::map<std::string, std::vector<std::size_t>> index_;
  std::size_t frontier_begin_ = 0;
  std::size_t frontier_end_ = 0;
};

}  // namespace detail

// Breadth-first search for a common reduct of h1 and h2 within max_depth
// rewrites on each side, comparing states up to interface-preserving
// isomorphism.
inline JoinResult joinable(const RewriteSystem& sys, const InterfacedHypergraph& h1,
                           const InterfacedHypergraph& h2, const JoinOptions& opts = {}) {
  JoinResult result;
  if (isomorphic(h1, h2)) {
    result.status = JoinStatus::Joinable;
    return result;
  }
  detail::Closure left(h1), right(h2);
  std::optional<std::pair<std::size_t, std::size_t>> meet;

  auto probe = [&](const detail::Closure& other, bool from_left) {
    return [&, from_left](std::size_t k) {
      const auto& mine = from_left ? left.state(k) : right.state(k);
      if (auto hit = other.find(mine.graph, mine.key)) {
        meet = from_left ? std::pair{k, *hit} : std::pair{*hit, k};
        return true;
      }
      return false;
    };
  };

  for (std::size_t depth = 1; depth <= opts.max_depth; ++depth) {
    bool overflow = false;
    const bool left_was_done = left.exhausted();
    if (!left_was_done && left.expand(sys, opts.max_states, overflow, probe(right, true))) break;
    if (!overflow && !right.exhausted() && right.expand(sys, opts.max_states, overflow, probe(left, false)))
      break;
    result.depth = depth;
    if (overflow) {
      result.state_overflow = true;
      result.status = JoinStatus::NotJoinableWithin;
      return result;
    }
    if (left.exhausted() && right.exhausted()) {
      result.status = JoinStatus::NotJoinable;
      return result;
    }
  }

  if (meet) {
    result.status = JoinStatus::Joinable;
    result.left_witness = left.path_to(meet->first);
    result.right_witness = right.path_to(meet->second);
    result.depth = std::max(result.left_witness.size(), result.right_witness.size());
    return result;
  }
  result.status = (left.exhausted() && right.exhausted()) ? JoinStatus::NotJoinable
                                                          : JoinStatus::NotJoinableWithin;
  result.depth = opts.max_depth;
  return result;
}

enum class ConfluenceVerdict { LocallyConfluent, NotLocallyConfluent, Unknown };

inline std::string_view to_string(ConfluenceVerdict v) {
  switch (v) {
    case ConfluenceVerdict::LocallyConfluent: return "locally_confluent";
    case ConfluenceVerdict::NotLocallyConfluent: return "not_locally_confluent";
    case ConfluenceVerdict::Unknown: return "unknown";
  }
  return "unknown";
}

struct PairReport {
  CriticalPairCandidate pair;
  InterfacedHypergraph h1, h2;
  JoinResult join;
};

struct ConfluenceReport {
  ConfluenceVerdict verdict = ConfluenceVerdict::LocallyConfluent;
  std::vector<PairReport> pairs;
};

struct ConfluenceOptions {
  JoinOptions join;
  std::optional<DedupMode> dedup = DedupMode::Symmetric;
  std::size_t jobs = 1;
};

// Tests every essential critical pair for joinability. Local confluence only;
// nothing is claimed about termination.
inline ConfluenceReport check_local_confluence(const RewriteSystem& sys, const ConfluenceOptions& opts = {}) {
  EnumerationOptions enum_opts;
  enum_opts.mode = EnumerationMode::Essential;
  auto pairs = collect_critical_pairs(sys, enum_opts, opts.jobs);
  if (opts.dedup) pairs = dedup_up_to_iso(std::move(pairs), *opts.dedup);

  ConfluenceReport report;
  report.pairs.resize(pairs.size());
  auto work = [&](std::size_t k) {
    auto [d1, d2] = derive_pair(sys, pairs[k]);
    report.pairs[k] = PairReport{pairs[k], d1.result, d2.result, joinable(sys, d1.result, d2.result, opts.join)};
  };
  if (opts.jobs <= 1 || pairs.size() <= 1) {
    for (std::size_t k = 0; k < pairs.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < std::min(opts.jobs, pairs.size()); ++w)
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < pairs.size(); k = next++) work(k);
      });
  }

  bool unknown = false;
  for (const auto& p : report.pairs) {
    if (p.join.status == JoinStatus::NotJoinable) {
      report.verdict = ConfluenceVerdict::NotLocallyConfluent;
      return report;
    }
    if (p.join.status == JoinStatus::NotJoinableWithin) unknown = true;
  }
  report.verdict = unknown ? ConfluenceVerdict::Unknown : ConfluenceVerdict::LocallyConfluent;
  return report;
}

}  // namespace dpoi
