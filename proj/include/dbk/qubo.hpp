#ifndef DBK_QUBO_HPP
#define DBK_QUBO_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dbk/graph.hpp"
#include "dbk/rng.hpp"

namespace dbk {

using Assignment = std::vector<uint8_t>;

// Quadratic unconstrained binary optimization problem
//   E(x) = sum_i a_i x_i + sum_{i<j} a_ij x_i x_j,  x in {0,1}^n.
// Quadratic terms are kept canonical (i < j) and accumulate; entries that
// cancel to zero are dropped.
class Qubo {
 public:
  Qubo() = default;
  explicit Qubo(int n) : n_(n), linear_(n, 0.0) {}

  int num_vars() const { return n_; }

  void add_linear(int i, double c) { linear_[i] += c; }

  void add_quadratic(int i, int j, double c) {
    if (i == j) throw std::invalid_argument("qubo: diagonal quadratic term");
    if (i > j) std::swap(i, j);
    auto key = std::make_pair(i, j);
    auto it = quad_.find(key);
    double v = (it == quad_.end() ? 0.0 : it->second) + c;
    if (v == 0.0) {
      if (it != quad_.end()) quad_.erase(it);
    } else {
      quad_[key] = v;
    }
  }

  double linear(int i) const { return linear_[i]; }

  const std::map<std::pair<int, int>, double>& quadratic() const { return quad_; }

  double energy(const Assignment& x) const {
    double e = 0.0;
    for (int i = 0; i < n_; ++i)
      if (x[i]) e += linear_[i];
    for (const auto& [ij, c] : quad_)
      if (x[ij.first] && x[ij.second]) e += c;
    return e;
  }

  // Per-variable view of all incident terms, for incremental energy updates.
  std::vector<std::vector<std::pair<int, double>>> adjacency() const {
    std::vector<std::vector<std::pair<int, double>>> adj(n_);
    for (const auto& [ij, c] : quad_) {
      adj[ij.first].emplace_back(ij.second, c);
      adj[ij.second].emplace_back(ij.first, c);
    }
    return adj;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (double c : linear_) m = std::max(m, std::abs(c));
    for (const auto& [ij, c] : quad_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  int n_ = 0;
  std::vector<double> linear_;
  std::map<std::pair<int, int>, double> quad_;
};

// Maximum clique as QUBO: -A per chosen vertex, +B per chosen non-adjacent
// pair.  With B >= 2A every energy minimizer is exactly a maximum clique's
// indicator vector (dropping one endpoint of a violated pair gains at least
// B - A > 0, and among conflict-free sets larger is better).
inline Qubo maxclique_to_qubo(const Graph& g, double a = 1.0, double b = 2.0) {
  if (b < 2.0 * a)
    std::cerr << "warning: maxclique penalty B=" << b << " below 2A=" << 2.0 * a
              << "; minimizers may not be cliques\n";
  Qubo q(g.size());
  for (int v = 0; v < g.size(); ++v) q.add_linear(v, -a);
  for (int u = 0; u < g.size(); ++u)
    for (int v = u + 1; v < g.size(); ++v)
      if (!g.adjacent(u, v)) q.add_quadratic(u, v, b);
  return q;
}

// Exhaustive minimization by a Gray-code walk (one bit flips per step, energy
// maintained incrementally).  Ties resolve to the lexicographically smallest
// assignment vector (x_0 first).  Refuses instances above the cap.
inline std::pair<Assignment, double> brute_force_solve(const Qubo& q, int cap = 24) {
  int n = q.num_vars();
  if (n > cap) throw std::invalid_argument("brute force: instance above cap");
  Assignment x(n, 0), best(n, 0);
  double e = 0.0, best_e = 0.0;
  if (n == 0) return {best, 0.0};
  auto adj = q.adjacency();
  uint64_t total = uint64_t{1} << n;
  for (uint64_t step = 1; step < total; ++step) {
    int i = std::countr_zero(step);
    double delta = q.linear(i);
    for (auto [j, c] : adj[i])
      if (x[j]) delta += c;
    if (x[i]) {
      x[i] = 0;
      e -= delta;
    } else {
      x[i] = 1;
      e += delta;
    }
    if (e < best_e || (e == best_e && x < best)) {
      best_e = e;
      best = x;
    }
  }
  return {best, best_e};
}

struct SaSchedule {
  double t_start = 0.0;  // 0 = derive from coefficients
  double t_end = 0.01;
};

struct SaParams {
  int sweeps = 1000;
  int restarts = 4;
  SaSchedule schedule;
};

// Single-bit-flip Metropolis annealing with a geometric temperature
// schedule.  Each restart draws its own stream from (seed, restart); the
// all-zeros state seeds the incumbent, so the result never exceeds energy 0.
// The returned energy is recomputed from scratch as a self-check.
inline std::pair<Assignment, double> simulated_annealing_solve(const Qubo& q,
                                                               uint64_t seed,
                                                               const SaParams& params = {}) {
  int n = q.num_vars();
  Assignment best(n, 0);
  double best_e = 0.0;
  if (n == 0) return {best, 0.0};
  auto adj = q.adjacency();
  double t0 = params.schedule.t_start;
  if (t0 <= 0.0) t0 = std::max(q.max_abs_coefficient(), 1e-3);
  double t1 = params.schedule.t_end;
  for (int r = 0; r < params.restarts; ++r) {
    SplitMix64 rng(mix64(seed, uint64_t(r)));
    Assignment x(n);
    for (int i = 0; i < n; ++i) x[i] = uint8_t(rng.next() & 1);
    double e = q.energy(x);
    if (e < best_e) {
      best_e = e;
      best = x;
    }
    for (int s = 0; s < params.sweeps; ++s) {
      double frac = params.sweeps > 1 ? double(s) / double(params.sweeps - 1) : 1.0;
      double t = t0 * std::pow(t1 / t0, frac);
      for (int i = 0; i < n; ++i) {
        double delta = q.linear(i);
        for (auto [j, c] : adj[i])
          if (x[j]) delta += c;
        if (x[i]) delta = -delta;
        bool accept = delta <= 0.0 ||
                      (t > 0.0 && rng.next_double() < std::exp(-delta / t));
        if (accept) {
          x[i] ^= 1;
          e += delta;
          if (e < best_e) {
            best_e = e;
            best = x;
          }
        }
      }
    }
  }
  double check = q.energy(best);
  // incremental bookkeeping must agree with a fresh evaluation
  if (std::abs(check - best_e) > 1e-6 * std::max(1.0, std::abs(check)))
    throw std::logic_error("sa: inconsistent incremental energy");
  return {best, check};
}

}  // namespace dbk

#endif  // DBK_QUBO_HPP
