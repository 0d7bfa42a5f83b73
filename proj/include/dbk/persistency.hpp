#ifndef DBK_PERSISTENCY_HPP
#define DBK_PERSISTENCY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dbk/qubo.hpp"

namespace dbk {

// Roof-duality persistency (Boros-Hammer-Tavares).  The QUBO is rewritten as
// a posiform, the posiform as a flow network over literals u_i / not-u_i, and
// a maximum flow exposes variables whose value is fixed in some or all
// optima:
//
//   strong: the literal is reachable from the source in the symmetrized
//           residual network; its value holds in every optimal assignment.
//   weak:   recovered from strongly connected components of the residual
//           whose condensation out-degree is zero; some optimal assignment
//           realizes these values jointly with the strong ones.
//
// Capacities stay integral by scaling the textbook construction uniformly by
// two, so all flow arithmetic is exact; coefficients must be integers.

struct Fixing {
  int var = 0;
  int value = 0;
  bool strong = false;
};

struct PersistencyResult {
  std::vector<Fixing> fixings;           // sorted by var
  Qubo reduced;                          // over the unfixed variables
  std::vector<int> reduced_to_original;  // reduced var -> original var
  double offset = 0.0;  // energy(original, completion of x) = energy(reduced, x) + offset
};

namespace detail {

// Implication network with Dinic max flow.  Arcs are created in linked
// groups of four: edge, its reverse, the complement-symmetric edge, and that
// one's reverse, so residual symmetrization can find partners in O(1).
class ImplicationNetwork {
 public:
  explicit ImplicationNetwork(int nvars)
      : nvars_(nvars), source_(2 * nvars), sink_(2 * nvars + 1), adj_(2 * nvars + 2) {}

  int pos(int i) const { return 2 * i; }
  int neg(int i) const { return 2 * i + 1; }
  int source() const { return source_; }
  int sink() const { return sink_; }

  int complement(int v) const {
    if (v == source_) return sink_;
    if (v == sink_) return source_;
    return v ^ 1;
  }

  // term c * l_u * l_v (c > 0) over literals u, v: penalize u by pushing
  // toward complement(v), plus the symmetric image of that arc
  void add_term(int u, int v, int64_t c) {
    int a = add_arc(u, v, c);
    int b = add_arc(v, u, 0);
    int as = add_arc(complement(v), complement(u), c);
    int bs = add_arc(complement(u), complement(v), 0);
    sym_[a] = as;
    sym_[as] = a;
    sym_[b] = bs;
    sym_[bs] = b;
  }

  int64_t max_flow() {
    int64_t flow = 0;
    while (bfs_levels()) {
      iter_.assign(adj_.size(), 0);
      int64_t f;
      while ((f = dfs_augment(source_, std::numeric_limits<int64_t>::max())) > 0) flow += f;
    }
    return flow;
  }

  // cap_ holds residuals after max_flow(); each arc and its symmetric image
  // get the sum of their residuals (positivity is what reachability needs)
  void symmetrize_residuals() {
    for (size_t a = 0; a < to_.size(); ++a) {
      size_t s = size_t(sym_[a]);
      if (a < s) {
        int64_t t = cap_[a] + cap_[s];
        cap_[a] = t;
        cap_[s] = t;
      }
    }
  }

  // residual adjacency, dropping arcs into the source and out of the sink
  std::vector<std::vector<int>> residual_adjacency() const {
    std::vector<std::vector<int>> out(adj_.size());
    for (int u = 0; u < int(adj_.size()); ++u) {
      if (u == sink_) continue;
      for (int a : adj_[u])
        if (cap_[a] > 0 && to_[a] != source_) out[u].push_back(to_[a]);
    }
    return out;
  }

 private:
  int add_arc(int u, int v, int64_t c) {
    int id = int(to_.size());
    to_.push_back(v);
    cap_.push_back(c);
    rev_.push_back(0);
    sym_.push_back(0);
    adj_[u].push_back(id);
    if (id % 2 == 1) {
      rev_[id] = id - 1;
      rev_[id - 1] = id;
    }
    return id;
  }

  bool bfs_levels() {
    level_.assign(adj_.size(), -1);
    std::deque<int> q{source_};
    level_[source_] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int a : adj_[u])
        if (cap_[a] > 0 && level_[to_[a]] < 0) {
          level_[to_[a]] = level_[u] + 1;
          q.push_back(to_[a]);
        }
    }
    return level_[sink_] >= 0;
  }

  int64_t dfs_augment(int u, int64_t limit) {
    if (u == sink_) return limit;
    for (size_t& i = iter_[u]; i < adj_[u].size(); ++i) {
      int a = adj_[u][i];
      int v = to_[a];
      if (cap_[a] > 0 && level_[v] == level_[u] + 1) {
        int64_t f = dfs_augment(v, std::min(limit, cap_[a]));
        if (f > 0) {
          cap_[a] -= f;
          cap_[rev_[a]] += f;
          return f;
        }
      }
    }
    return 0;
  }

  int nvars_, source_, sink_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> to_, rev_, sym_;
  std::vector<int64_t> cap_;
  std::vector<int> level_;
  std::vector<size_t> iter_;
};

// Iterative Tarjan; component ids are assigned in completion order, which
// keeps downstream processing deterministic.
inline std::vector<int> strongly_connected_components(
    const std::vector<std::vector<int>>& adj, int& ncomp) {
  int n = int(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  int next_index = 0;
  ncomp = 0;
  struct Frame {
    int v;
    size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        int w = adj[f.v][f.child++];
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          int c = ncomp++;
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = c;
            if (w == f.v) break;
          }
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return comp;
}

inline int64_t integral_coefficient(double c) {
  int64_t r = llround(c);
  if (std::abs(c - double(r)) > 1e-9)
    throw std::invalid_argument("persistency: coefficients must be integral");
  return r;
}

}  // namespace detail

inline PersistencyResult persistency(const Qubo& q, bool include_weak = false) {
  int n = q.num_vars();
  PersistencyResult result;
  if (n == 0) return result;

  // posiform: negative quadratic terms fold into the linear part of the
  // lower-indexed variable and flip to a mixed term; negative linear terms
  // shift the constant and flip the literal
  std::vector<int64_t> lin(n);
  for (int i = 0; i < n; ++i) lin[i] = detail::integral_coefficient(q.linear(i));

  detail::ImplicationNetwork net(n);
  for (const auto& [ij, cd] : q.quadratic()) {
    auto [i, j] = ij;
    int64_t c = detail::integral_coefficient(cd);
    if (c > 0) {
      net.add_term(net.pos(i), net.neg(j), c);
    } else {
      lin[i] += c;
      net.add_term(net.pos(i), net.pos(j), -c);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (lin[i] > 0)
      net.add_term(net.source(), net.neg(i), lin[i]);
    else if (lin[i] < 0)
      net.add_term(net.source(), net.pos(i), -lin[i]);
  }

  net.max_flow();
  net.symmetrize_residuals();
  auto radj = net.residual_adjacency();

  // strong persistencies: literals reachable from the source
  std::vector<char> reach(radj.size(), 0);
  std::deque<int> bfs{net.source()};
  reach[net.source()] = 1;
  while (!bfs.empty()) {
    int u = bfs.front();
    bfs.pop_front();
    for (int v : radj[u])
      if (!reach[v]) {
        if (v == net.sink()) throw std::logic_error("persistency: residual reaches sink");
        reach[v] = 1;
        bfs.push_back(v);
      }
  }

  std::vector<int> value(n, -1);
  std::vector<char> strong(n, 0);
  for (int i = 0; i < n; ++i) {
    bool p = reach[net.pos(i)], m = reach[net.neg(i)];
    if (p && m) throw std::logic_error("persistency: contradictory strong fixing");
    if (p || m) {
      value[i] = p ? 1 : 0;
      strong[i] = 1;
    }
  }

  if (include_weak) {
    int ncomp = 0;
    std::vector<int> comp = detail::strongly_connected_components(radj, ncomp);

    // complement map between components; mismatch would mean a broken network
    std::vector<int> cmate(ncomp, -1);
    for (int v = 0; v < int(radj.size()); ++v) {
      int c = comp[v], cc = comp[net.complement(v)];
      if (cmate[c] >= 0 && cmate[c] != cc)
        throw std::logic_error("persistency: inconsistent component complement");
      cmate[c] = cc;
    }

    // condensation with unique arcs
    std::vector<std::vector<int>> cout(ncomp), cin(ncomp);
    for (int u = 0; u < int(radj.size()); ++u)
      for (int v : radj[u])
        if (comp[u] != comp[v]) {
          cout[comp[u]].push_back(comp[v]);
          cin[comp[v]].push_back(comp[u]);
        }
    for (auto* lists : {&cout, &cin})
      for (auto& l : *lists) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
      }

    // retire source/sink components and strong components with their mates;
    // the rest are eliminated back to front by condensation out-degree.
    // Retired components are transparent: an arc into one is either satisfied
    // by a fixed head or provably absent.  Self-complementary components are
    // different: their literals stay free, so an arc into one is a live
    // residual term that fixing the tail could violate.  They are locked
    // instead — never chosen, and still blocking their predecessors.
    std::vector<char> retired(ncomp, 0), locked(ncomp, 0);
    retired[comp[net.source()]] = 1;
    retired[comp[net.sink()]] = 1;
    for (int i = 0; i < n; ++i)
      if (strong[i]) {
        retired[comp[net.pos(i)]] = 1;
        retired[comp[net.neg(i)]] = 1;
      }
    for (int c = 0; c < ncomp; ++c)
      if (cmate[c] == c && !retired[c]) locked[c] = 1;

    // arcs toward retired components no longer block elimination
    std::vector<int> eff(ncomp, 0);
    for (int c = 0; c < ncomp; ++c) {
      if (retired[c] || locked[c]) {
        eff[c] = -1;
        continue;
      }
      int d = 0;
      for (int t : cout[c])
        if (!retired[t]) ++d;
      eff[c] = d;
    }

    std::deque<int> ready;
    for (int c = 0; c < ncomp; ++c)
      if (eff[c] == 0) ready.push_back(c);

    std::vector<char> chosen(ncomp, 0);
    while (!ready.empty()) {
      int c = ready.front();
      ready.pop_front();
      if (retired[c]) continue;
      int cm = cmate[c];
      chosen[c] = 1;
      retired[c] = 1;
      retired[cm] = 1;
      for (int victim : {c, cm})
        for (int p : cin[victim])
          if (!retired[p] && !locked[p] && --eff[p] == 0) ready.push_back(p);
    }

    for (int v = 0; v < int(radj.size()); ++v) {
      if (v == net.source() || v == net.sink()) continue;
      if (chosen[comp[v]] && value[v / 2] < 0) value[v / 2] = (v % 2 == 0) ? 1 : 0;
    }
  }

  // assemble fixings and the reduced problem
  std::vector<int> new_index(n, -1);
  for (int i = 0; i < n; ++i) {
    if (value[i] >= 0) {
      result.fixings.push_back({i, value[i], bool(strong[i])});
    } else {
      new_index[i] = int(result.reduced_to_original.size());
      result.reduced_to_original.push_back(i);
    }
  }
  result.reduced = Qubo(int(result.reduced_to_original.size()));
  for (int i = 0; i < n; ++i) {
    if (value[i] >= 0)
      result.offset += q.linear(i) * value[i];
    else
      result.reduced.add_linear(new_index[i], q.linear(i));
  }
  for (const auto& [ij, c] : q.quadratic()) {
    auto [i, j] = ij;
    if (value[i] >= 0 && value[j] >= 0)
      result.offset += c * value[i] * value[j];
    else if (value[i] >= 0) {
      if (value[i] == 1) result.reduced.add_linear(new_index[j], c);
    } else if (value[j] >= 0) {
      if (value[j] == 1) result.reduced.add_linear(new_index[i], c);
    } else {
      result.reduced.add_quadratic(new_index[i], new_index[j], c);
    }
  }
  return result;
}

}  // namespace dbk

#endif  // DBK_PERSISTENCY_HPP
