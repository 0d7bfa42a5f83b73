#ifndef DBK_EXACT_HPP
#define DBK_EXACT_HPP

#include <algorithm>
#include <numeric>
#include <vector>

#include "dbk/bitset.hpp"
#include "dbk/graph.hpp"

namespace dbk {

namespace detail {

// Branch and bound in the style of Tomita's MCQ: candidates are greedily
// colored, visited in reverse color order, and a branch is cut as soon as
// clique size plus color class number cannot beat the incumbent.  Vertices
// are pre-sorted by descending degree once; all set work is on bitsets.
class MaxCliqueSearch {
 public:
  explicit MaxCliqueSearch(const Graph& g) : g_(g), n_(g.size()) {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<int> deg = g.degrees();
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      if (deg[a] != deg[b]) return deg[a] > deg[b];
      return a < b;
    });
    pos_.resize(n_);
    for (int i = 0; i < n_; ++i) pos_[order_[i]] = i;
    // adjacency permuted into search order
    adj_.assign(n_, Bitset(n_));
    for (int u = 0; u < n_; ++u)
      g.neighbors(order_[u]).for_each([&](int v) { adj_[u].set(pos_[v]); });
  }

  VertexSet run() {
    if (n_ == 0) return {};
    Bitset all(n_);
    for (int v = 0; v < n_; ++v) all.set(v);
    current_.clear();
    best_.clear();
    expand(all);
    VertexSet out;
    out.reserve(best_.size());
    for (int v : best_) out.push_back(order_[v]);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void expand(Bitset cand) {
    // greedy coloring of the candidate set, in search order within a class
    std::vector<std::pair<int, int>> colored;  // (vertex, color), colors ascending
    Bitset uncolored = cand;
    int color = 0;
    while (uncolored.any()) {
      ++color;
      Bitset cls = uncolored;
      while (cls.any()) {
        int v = cls.find_first();
        colored.emplace_back(v, color);
        uncolored.reset(v);
        cls.reset(v);
        cls.and_not(adj_[v]);
      }
    }
    for (int i = int(colored.size()) - 1; i >= 0; --i) {
      auto [v, c] = colored[i];
      if (current_.size() + size_t(c) <= best_.size()) return;
      current_.push_back(v);
      Bitset next = cand;
      next &= adj_[v];
      if (next.any())
        expand(next);
      else if (current_.size() > best_.size())
        best_ = current_;
      current_.pop_back();
      cand.reset(v);
    }
  }

  const Graph& g_;
  int n_;
  std::vector<int> order_, pos_;
  std::vector<Bitset> adj_;
  std::vector<int> current_, best_;
};

}  // namespace detail

// Exact maximum clique, returned as sorted vertex indices.  Deterministic.
inline VertexSet exact_max_clique(const Graph& g) {
  detail::MaxCliqueSearch search(g);
  return search.run();
}

}  // namespace dbk

#endif  // DBK_EXACT_HPP
