#ifndef DBK_KCORE_HPP
#define DBK_KCORE_HPP

#include <vector>

#include "dbk/graph.hpp"

namespace dbk {

// Vertices of the maximal subgraph in which every vertex has degree >= k,
// returned sorted ascending.  Iterative peeling; the k-core is unique, so the
// peel order does not affect the result.
inline VertexSet vertex_kcore(const Graph& g, int k) {
  int n = g.size();
  std::vector<int> deg = g.degrees();
  std::vector<char> dead(n, 0);
  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (deg[v] < k) {
      dead[v] = 1;
      queue.push_back(v);
    }
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    g.neighbors(v).for_each([&](int u) {
      if (!dead[u] && --deg[u] < k) {
        dead[u] = 1;
        queue.push_back(u);
      }
    });
  }
  VertexSet core;
  for (int v = 0; v < n; ++v)
    if (!dead[v]) core.push_back(v);
  return core;
}

// Peel order for bounds: repeatedly remove a minimum-degree vertex, ties
// broken by ascending index.  Returns the removal order; core[v] is the
// largest k such that v belongs to the k-core (the core number).
struct Degeneracy {
  std::vector<int> order;
  std::vector<int> core;
};

inline Degeneracy degeneracy_order(const Graph& g) {
  int n = g.size();
  Degeneracy d;
  d.order.reserve(n);
  d.core.assign(n, 0);
  std::vector<int> deg = g.degrees();
  std::vector<char> dead(n, 0);
  int maxcore = 0;
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!dead[v] && (best < 0 || deg[v] < deg[best])) best = v;
    maxcore = std::max(maxcore, deg[best]);
    d.core[best] = maxcore;
    d.order.push_back(best);
    dead[best] = 1;
    g.neighbors(best).for_each([&](int u) {
      if (!dead[u]) --deg[u];
    });
  }
  return d;
}

// Edge analogue used while hunting cliques of size > bound: an edge can only
// be part of such a clique if its endpoints share at least bound-1 common
// neighbors.  Edges below the threshold are deleted and the test is repeated
// until a fixpoint.  The historical variant (threshold bound-2) is kept
// behind a flag for comparison runs; it deletes less and never misses more.
inline Graph edge_kcore(const Graph& g, int bound, bool legacy_threshold = false) {
  Graph h = g;  // work on a copy, dropping edges in place
  int need = bound - (legacy_threshold ? 2 : 1);
  if (need <= 0) return h;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int u = 0; u < h.size(); ++u) {
      // snapshot: removal invalidates iteration over the live row
      VertexSet nbrs = h.neighbors(u).to_vector();
      for (int v : nbrs) {
        if (u < v && h.neighbors(u).and_count(h.neighbors(v)) < need) {
          remove_edge_inplace(h, u, v);
          changed = true;
        }
      }
    }
  }
  return h;
}

}  // namespace dbk

#endif  // DBK_KCORE_HPP
