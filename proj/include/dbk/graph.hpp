#ifndef DBK_GRAPH_HPP
#define DBK_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbk/bitset.hpp"
#include "dbk/rng.hpp"

namespace dbk {

using VertexSet = std::vector<int>;

// Raised for malformed DIMACS input; the message always carries the
// 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Simple undirected graph.  Vertices are dense indices 0..n-1; adjacency is a
// bitset row per vertex.  Every vertex additionally carries a label: for a
// parsed or generated graph this is the external 1-based id, and subgraph
// operations compose labels so that a vertex of a deeply nested subproblem
// still names its original vertex.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n) : n_(n), adj_(n, Bitset(n)), labels_(n) {
    for (int i = 0; i < n; ++i) labels_[i] = i + 1;
  }

  int size() const { return n_; }
  int edge_count() const { return m_; }

  bool adjacent(int u, int v) const { return adj_[u].test(v); }

  void add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("self-loop");
    if (!adj_[u].test(v)) {
      adj_[u].set(v);
      adj_[v].set(u);
      ++m_;
    }
  }

  int degree(int v) const { return adj_[v].count(); }

  const Bitset& neighbors(int v) const { return adj_[v]; }

  int label(int v) const { return labels_[v]; }
  const std::vector<int>& labels() const { return labels_; }
  void set_label(int v, int lab) { labels_[v] = lab; }

  std::vector<int> degrees() const {
    std::vector<int> d(n_);
    for (int v = 0; v < n_; ++v) d[v] = adj_[v].count();
    return d;
  }

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<Bitset> adj_;
  std::vector<int> labels_;

  friend void remove_edge_inplace(Graph&, int, int);
};

inline void remove_edge_inplace(Graph& g, int u, int v) {
  if (g.adj_[u].test(v)) {
    g.adj_[u].reset(v);
    g.adj_[v].reset(u);
    --g.m_;
  }
}

// Edge density m / C(n,2); graphs with fewer than two vertices have density 0.
inline double density(const Graph& g) {
  long long n = g.size();
  if (n < 2) return 0.0;
  return double(g.edge_count()) / (double(n) * double(n - 1) / 2.0);
}

inline bool is_clique(const Graph& g, const VertexSet& vs) {
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j)
      if (vs[i] == vs[j] || !g.adjacent(vs[i], vs[j])) return false;
  return true;
}

// DIMACS ascii clique format: 'c' comment lines, one 'p edge <n> <m>' header,
// then 'e <u> <v>' lines with 1-based endpoints.  Duplicate edges collapse;
// the declared edge count is not enforced against the actual one because
// well-known instance files disagree with their own headers.  A comment of
// the exact shape 'c v <id> <label>' after the header restores a vertex
// label, which is how subproblem files written by this library stay
// traceable to their original instance; any other comment is ignored.
inline Graph parse_dimacs(std::istream& in) {
  Graph g;
  bool have_p = false;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line
    if (tok == "c") {
      std::string sub;
      long long id = 0, lab = 0;
      if (have_p && (ls >> sub) && sub == "v" && (ls >> id >> lab) && id >= 1 &&
          id <= g.size())
        g.set_label(int(id - 1), int(lab));
      continue;
    }
    if (tok == "p") {
      if (have_p) fail("duplicate problem line");
      std::string fmt;
      long long n = -1, m = -1;
      if (!(ls >> fmt >> n >> m)) fail("malformed problem line");
      if (fmt != "edge" && fmt != "col") fail("unsupported format '" + fmt + "'");
      if (n < 0) fail("negative vertex count");
      g = Graph(int(n));
      have_p = true;
    } else if (tok == "e") {
      if (!have_p) fail("edge before problem line");
      long long u = 0, v = 0;
      if (!(ls >> u >> v)) fail("malformed edge line");
      if (u < 1 || u > g.size() || v < 1 || v > g.size())
        fail("vertex id out of range");
      if (u == v) fail("self-loop");
      g.add_edge(int(u - 1), int(v - 1));
    } else {
      fail("unknown line type '" + tok + "'");
    }
  }
  if (!have_p) {
    lineno = std::max(lineno, 1);
    fail("missing problem line");
  }
  return g;
}

inline Graph parse_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_dimacs(in);
}

// Writes 'p edge n m' followed by edges sorted by (u, v) with u < v, 1-based
// dense indices.  When with_labels is set, a 'c v <id> <label>' comment per
// vertex records the original labels, so subproblem files stay traceable.
inline void write_dimacs(const Graph& g, std::ostream& out, bool with_labels = false) {
  out << "p edge " << g.size() << " " << g.edge_count() << "\n";
  if (with_labels)
    for (int v = 0; v < g.size(); ++v)
      out << "c v " << v + 1 << " " << g.label(v) << "\n";
  for (int u = 0; u < g.size(); ++u)
    g.neighbors(u).for_each([&](int v) {
      if (u < v) out << "e " << u + 1 << " " << v + 1 << "\n";
    });
}

// Erdos-Renyi G(n, p).  Pairs (u, v), u < v, are visited in lexicographic
// order and each consumes exactly one double from a SplitMix64 stream seeded
// with `seed`; the edge exists iff the draw is < p.  This fixed order is part
// of the reproducibility contract.
inline Graph gnp_generate(int n, double p, uint64_t seed) {
  if (n < 0) throw std::invalid_argument("gnp: negative n");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gnp: p outside [0,1]");
  Graph g(n);
  SplitMix64 rng(seed);
  for (int u = 0; u + 1 < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_double() < p) g.add_edge(u, v);
  return g;
}

// Subgraph induced by a sorted set of vertices; labels compose.
inline Graph induced_subgraph(const Graph& g, const VertexSet& keep) {
  Graph sub(int(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) sub.set_label(int(i), g.label(keep[i]));
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = i + 1; j < keep.size(); ++j)
      if (g.adjacent(keep[i], keep[j])) sub.add_edge(int(i), int(j));
  return sub;
}

// Subgraph induced by the open neighborhood of v (v itself excluded).
inline Graph neighborhood_subgraph(const Graph& g, int v) {
  return induced_subgraph(g, g.neighbors(v).to_vector());
}

inline Graph remove_vertex(const Graph& g, int v) {
  VertexSet keep;
  keep.reserve(g.size() - 1);
  for (int u = 0; u < g.size(); ++u)
    if (u != v) keep.push_back(u);
  return induced_subgraph(g, keep);
}

}  // namespace dbk

#endif  // DBK_GRAPH_HPP
