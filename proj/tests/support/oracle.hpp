#ifndef DBK_TESTS_ORACLE_HPP
#define DBK_TESTS_ORACLE_HPP

// Reference implementations the test suite trusts instead of the library:
// deliberately written with different algorithms and plain data structures.

#include <cstdint>
#include <vector>

#include "dbk/graph.hpp"

namespace oracle {

// Carraghan-Pardalos style maximum clique: candidate lists as plain vectors,
// pruning only on remaining-count.  No coloring, no bitsets.
class CpSearch {
 public:
  explicit CpSearch(const dbk::Graph& g) : n_(g.size()) {
    adj_.assign(n_, std::vector<char>(n_, 0));
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v) adj_[u][v] = g.adjacent(u, v) ? 1 : 0;
  }

  std::vector<int> run() {
    best_.clear();
    cur_.clear();
    std::vector<int> cand(n_);
    for (int i = 0; i < n_; ++i) cand[i] = i;
    expand(cand);
    return best_;
  }

 private:
  void expand(const std::vector<int>& cand) {
    if (cand.empty()) {
      if (cur_.size() > best_.size()) best_ = cur_;
      return;
    }
    for (size_t i = 0; i < cand.size(); ++i) {
      if (cur_.size() + (cand.size() - i) <= best_.size()) return;
      int v = cand[i];
      std::vector<int> next;
      for (size_t j = i + 1; j < cand.size(); ++j)
        if (adj_[v][cand[j]]) next.push_back(cand[j]);
      cur_.push_back(v);
      expand(next);
      cur_.pop_back();
    }
  }

  int n_;
  std::vector<std::vector<char>> adj_;
  std::vector<int> cur_, best_;
};

inline std::vector<int> max_clique(const dbk::Graph& g) { return CpSearch(g).run(); }

inline int omega(const dbk::Graph& g) { return int(CpSearch(g).run().size()); }

// All maximum cliques as bitmasks, by full subset enumeration (n <= 20).
inline std::vector<uint32_t> maximum_clique_masks(const dbk::Graph& g) {
  int n = g.size();
  std::vector<uint32_t> adjmask(n, 0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (g.adjacent(u, v)) adjmask[u] |= uint32_t(1) << v;
  int best = 0;
  std::vector<uint32_t> out;
  for (uint32_t mask = 0; mask < (uint32_t(1) << n); ++mask) {
    bool clique = true;
    int size = 0;
    for (int v = 0; v < n && clique; ++v)
      if (mask & (uint32_t(1) << v)) {
        ++size;
        uint32_t rest = mask & ~(uint32_t(1) << v);
        if ((adjmask[v] & rest) != rest) clique = false;
      }
    if (!clique) continue;
    if (size > best) {
      best = size;
      out.clear();
    }
    if (size == best) out.push_back(mask);
  }
  return out;
}

// QUBO helpers independent of the library's Qubo class: dense matrix form.
struct DenseQubo {
  int n = 0;
  std::vector<double> lin;
  std::vector<std::vector<double>> quad;  // upper triangle i<j

  explicit DenseQubo(int nvars) : n(nvars), lin(nvars, 0.0),
                                  quad(nvars, std::vector<double>(nvars, 0.0)) {}

  double energy_mask(uint32_t mask) const {
    double e = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (uint32_t(1) << i)) {
        e += lin[i];
        for (int j = i + 1; j < n; ++j)
          if (mask & (uint32_t(1) << j)) e += quad[i][j];
      }
    return e;
  }
};

struct QuboMinima {
  double energy = 0.0;
  std::vector<uint32_t> argmin_masks;
};

inline QuboMinima minimize(const DenseQubo& q) {
  QuboMinima out;
  out.energy = q.energy_mask(0);
  out.argmin_masks.push_back(0);
  for (uint32_t mask = 1; mask < (uint32_t(1) << q.n); ++mask) {
    double e = q.energy_mask(mask);
    if (e < out.energy) {
      out.energy = e;
      out.argmin_masks.clear();
    }
    if (e == out.energy) out.argmin_masks.push_back(mask);
  }
  return out;
}

}  // namespace oracle

#endif  // DBK_TESTS_ORACLE_HPP
