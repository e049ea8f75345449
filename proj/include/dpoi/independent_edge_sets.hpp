#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace dpoi {

// A matching on the complete bipartite graph K_{A,B}: pairs whose left and
// right components are each pairwise distinct.
template <class A, class B>
using IndependentEdgeSet = std::vector<std::pair<A, B>>;

namespace detail {

// Advances `c` to the next k-combination of {0..n-1} in lexicographic order.
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::vector<std::size_t> first_combination(std::size_t k) {
  std::vector<std::size_t> c(k);
  std::iota(c.begin(), c.end(), 0);
  return c;
}

}  // namespace detail

// Independent edge sets with exactly k edges: for every k-subset x of `a` (in
// lexicographic order), every k-subset y' of `b`, and every permutation y of
// y', yields zip(x, y). Nothing is produced when k > min(|a|, |b|).
template <class A, class B>
class KIndependentEdgeSets {
 public:
  KIndependentEdgeSets(std::vector<A> a, std::vector<B> b, std::size_t k)
      : a_(std::move(a)), b_(std::move(b)), k_(k) {
    done_ = k_ > a_.size() || k_ > b_.size();
    if (!done_) {
      left_ = detail::first_combination(k_);
      right_ = detail::first_combination(k_);
      perm_ = right_;
    }
  }

  std::optional<IndependentEdgeSet<A, B>> next() {
    if (done_) return std::nullopt;
    IndependentEdgeSet<A, B> out;
    out.reserve(k_);
    for (std::size_t i = 0; i < k_; ++i) out.emplace_back(a_[left_[i]], b_[perm_[i]]);
    advance();
    return out;
  }

 private:
  void advance() {
    if (std::next_permutation(perm_.begin(), perm_.end())) return;
    if (detail::next_combination(right_, b_.size())) {
      perm_ = right_;
      return;
    }
    if (detail::next_combination(left_, a_.size())) {
      right_ = detail::first_combination(k_);
      perm_ = right_;
      return;
    }
    done_ = true;
  }

  std::vector<A> a_;
  std::vector<B> b_;
  std::size_t k_;
  bool done_ = false;
  std::vector<std::size_t> left_, right_, perm_;
};

// All independent edge sets on K_{a,b}, by increasing size k = 0..min(|a|,|b|).
template <class A, class B>
class IndependentEdgeSets {
 public:
  IndependentEdgeSets(std::vector<A> a, std::vector<B> b)
      : a_(std::move(a)), b_(std::move(b)), limit_(std::min(a_.size(), b_.size())),
        current_(a_, b_, 0) {}

  std::optional<IndependentEdgeSet<A, B>> next() {
    while (true) {
      if (auto s = current_.next()) return s;
      if (k_ == limit_) return std::nullopt;
      ++k_;
      current_ = KIndependentEdgeSets<A, B>(a_, b_, k_);
    }
  }

 private:
  std::vector<A> a_;
  std::vector<B> b_;
  std::size_t limit_;
  std::size_t k_ = 0;
  KIndependentEdgeSets<A, B> current_;
};

template <class A, class B>
std::vector<IndependentEdgeSet<A, B>> collect(IndependentEdgeSets<A, B> gen) {
  std::vector<IndependentEdgeSet<A, B>> out;
  while (auto s = gen.next()) out.push_back(std::move(*s));
  return out;
}

template <class A, class B>
std::vector<IndependentEdgeSet<A, B>> enumerate_independent_edge_sets(std::vector<A> a, std::vector<B> b) {
  return collect(IndependentEdgeSets<A, B>(std::move(a), std::move(b)));
}

template <class A, class B>
std::vector<IndependentEdgeSet<A, B>> enumerate_k_independent_edge_sets(std::vector<A> a, std::vector<B> b,
                                                                        std::size_t k) {
  KIndependentEdgeSets<A, B> gen(std::move(a), std::move(b), k);
  std::vector<IndependentEdgeSet<A, B>> out;
  while (auto s = gen.next()) out.push_back(std::move(*s));
  return out;
}

// Σ_k k!·C(a,k)·C(b,k).
inline std::size_t independent_edge_set_count(std::size_t a, std::size_t b) {
  std::size_t total = 0;
  for (std::size_t k = 0; k <= std::min(a, b); ++k) {
    std::size_t term = 1;
    for (std::size_t i = 0; i < k; ++i) term = term * (a - i) * (b - i) / (i + 1);
    total += term;
  }
  return total;
}

}  // namespace dpoi
