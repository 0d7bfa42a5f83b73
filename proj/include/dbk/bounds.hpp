#ifndef DBK_BOUNDS_HPP
#define DBK_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dbk/graph.hpp"
#include "dbk/kcore.hpp"
#include "dbk/rng.hpp"

namespace dbk {

struct BoundResult {
  int value = 0;
  bool is_upper = true;
  std::string method;
  VertexSet witness;  // a clique for lower bounds, empty otherwise
};

// Sequential greedy coloring: vertices in descending degree order (ties by
// ascending index), each assigned the smallest color absent from its already
// colored neighbors.  The number of colors used bounds the clique number from
// above.  Deterministic by construction.
inline BoundResult greedy_coloring_ub(const Graph& g) {
  int n = g.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> deg = g.degrees();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (deg[a] != deg[b]) return deg[a] > deg[b];
    return a < b;
  });
  std::vector<int> color(n, -1);
  int ncolors = 0;
  std::vector<char> used;
  for (int v : order) {
    used.assign(ncolors + 1, 0);
    g.neighbors(v).for_each([&](int u) {
      if (color[u] >= 0) used[color[u]] = 1;
    });
    int c = 0;
    while (c < int(used.size()) && used[c]) ++c;
    color[v] = c;
    ncolors = std::max(ncolors, c + 1);
  }
  return {ncolors, true, "greedy-coloring", {}};
}

// A clique on c vertices needs c(c-1)/2 edges, so m edges can hide at most
// floor((1 + sqrt(1 + 8m)) / 2) of them.  Meant for dense graphs; the solver
// consults it only above a density threshold.
inline BoundResult dense_edge_ub(const Graph& g) {
  if (g.size() == 0) return {0, true, "dense-edge", {}};
  long long m = g.edge_count();
  int c = int((1.0 + std::sqrt(1.0 + 8.0 * double(m))) / 2.0);
  // guard against double rounding right at a clique-count boundary
  while (1LL * c * (c - 1) / 2 > m) --c;
  while (1LL * (c + 1) * c / 2 <= m) ++c;
  return {c, true, "dense-edge", {}};
}

// Multi-start greedy clique construction.  Start vertices are taken from the
// tail of the degeneracy order (the last peeled vertices sit in the densest
// part of the graph); each start grows a clique by repeatedly adding the
// candidate with the most neighbors among the remaining candidates, ties
// broken at random from `seed`.  Returns the best clique found as witness.
inline BoundResult greedy_clique_lb(const Graph& g, uint64_t seed, int starts = 8) {
  int n = g.size();
  if (n == 0) return {0, false, "greedy-clique", {}};
  SplitMix64 rng(seed);
  Degeneracy d = degeneracy_order(g);
  VertexSet best;
  int nstarts = std::min(starts, n);
  for (int s = 0; s < nstarts; ++s) {
    int v0 = d.order[n - 1 - s];
    VertexSet clique{v0};
    Bitset cand = g.neighbors(v0);
    while (cand.any()) {
      int bestdeg = -1;
      VertexSet ties;
      cand.for_each([&](int u) {
        int du = g.neighbors(u).and_count(cand);
        if (du > bestdeg) {
          bestdeg = du;
          ties.clear();
          ties.push_back(u);
        } else if (du == bestdeg) {
          ties.push_back(u);
        }
      });
      int u = ties[rng.next_below(ties.size())];
      clique.push_back(u);
      cand &= g.neighbors(u);
    }
    if (clique.size() > best.size()) best = clique;
  }
  std::sort(best.begin(), best.end());
  return {int(best.size()), false, "greedy-clique", best};
}

}  // namespace dbk

#endif  // DBK_BOUNDS_HPP
