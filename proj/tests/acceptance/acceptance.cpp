// Acceptance checks for the decomposition solver.  Each numbered check
// prints exactly one PASS/FAIL line; the process exits nonzero if any
// executed check fails.
//
//   acceptance        runs all checks
//   acceptance N      runs check N (1..9)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "dbk/dbk.hpp"
#include "support/instances.hpp"
#include "support/oracle.hpp"

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& msg) {
  o.ok = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += msg;
}

oracle::DenseQubo densify(const dbk::Qubo& q) {
  oracle::DenseQubo d(q.num_vars());
  for (int i = 0; i < q.num_vars(); ++i) d.lin[i] = q.linear(i);
  for (const auto& [ij, c] : q.quadratic()) d.quad[ij.first][ij.second] = c;
  return d;
}

dbk::Qubo random_qubo(int n, uint64_t seed) {
  dbk::SplitMix64 rng(seed);
  dbk::Qubo q(n);
  for (int i = 0; i < n; ++i) q.add_linear(i, double(rng.next_below(9)) - 4.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.next_double() < 0.45)
        q.add_quadratic(i, j, double(rng.next_below(9)) - 4.0);
  return q;
}

// exact chromatic number by backtracking, small graphs only
bool colorable(const dbk::Graph& g, const std::vector<int>& order, size_t idx,
               int used, int k, std::vector<int>& color) {
  if (idx == order.size()) return true;
  int v = order[idx];
  int cap = std::min(k, used + 1);  // new colors in index order kills symmetry
  for (int c = 0; c < cap; ++c) {
    bool free = true;
    for (int u : order)
      if (color[u] == c && g.adjacent(u, v)) {
        free = false;
        break;
      }
    if (!free) continue;
    color[v] = c;
    if (colorable(g, order, idx + 1, std::max(used, c + 1), k, color)) return true;
    color[v] = -1;
  }
  return false;
}

int chromatic_number(const dbk::Graph& g) {
  int n = g.size();
  if (n == 0) return 0;
  std::vector<int> deg = g.degrees(), order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return deg[a] > deg[b]; });
  int lb = int(oracle::max_clique(g).size());
  for (int k = lb;; ++k) {
    std::vector<int> color(n, -1);
    if (colorable(g, order, 0, 0, k, color)) return k;
  }
}

// ---- 1: named instances solve to their known clique numbers --------------

Outcome check_named_instances() {
  Outcome o;
  dbk::SolverConfig cfg;
  cfg.workers = 4;

  auto solve_expect = [&](const std::string& name, const dbk::Graph& g, int n,
                          long m, int omega) {
    if (g.size() != n || g.edge_count() != long(m)) {
      fail(o, name + " construction (n=" + std::to_string(g.size()) + ", m=" +
                  std::to_string(g.edge_count()) + ")");
      return;
    }
    dbk::SolveReport r = dbk::dbk_solve(g, cfg);
    if (r.omega != omega || !dbk::is_clique(g, r.clique) ||
        int(r.clique.size()) != r.omega)
      fail(o, name + " omega " + std::to_string(r.omega) + " != " +
                  std::to_string(omega));
  };

  solve_expect("hamming6-2", instances::hamming(6, 2), 64, 1824, 32);
  solve_expect("hamming6-4", instances::hamming(6, 4), 64, 704, 4);
  solve_expect("johnson8-2-4", instances::johnson(8, 2, 4), 28, 210, 4);
  solve_expect("johnson8-4-4", instances::johnson(8, 4, 4), 70, 1855, 14);
  solve_expect("johnson16-2-4", instances::johnson(16, 2, 4), 120, 5460, 8);
  solve_expect("keller4", instances::keller4(), 171, 9435, 11);

  struct FileCase {
    const char* file;
    int omega;
  };
  for (const FileCase& fc : {FileCase{"p_hat300-1.clq", 8},
                             FileCase{"p_hat500-1.clq", 9},
                             FileCase{"brock200_2.clq", 12}}) {
    auto g = instances::load_dimacs(fc.file);
    if (!g) {
      fail(o, std::string(fc.file) + " not found under $DBK_DIMACS_DIR");
      continue;
    }
    dbk::SolveReport r = dbk::dbk_solve(*g, cfg);
    if (r.omega != fc.omega)
      fail(o, std::string(fc.file) + " omega " + std::to_string(r.omega) +
                  " != " + std::to_string(fc.omega));
  }
  return o;
}

// ---- 2: solver matches an independent reference on random panels ---------

Outcome check_reference_panel() {
  Outcome o;
  using U = dbk::UpperBoundKind;
  using L = dbk::LowerBoundKind;
  using R = dbk::ReductionKind;
  const std::set<U> ub_on = {U::GreedyColoring, U::DenseEdge};
  const std::set<L> lb_on = {L::GreedyClique, L::Sibling};
  const std::set<R> red_on = {R::VertexKcore, R::EdgeKcore, R::Persistency};

  for (int k = 0; k < 200; ++k) {
    int n = 10 + (k * 13) % 21;
    double p = 0.1 + 0.1 * (k % 9);
    dbk::Graph g = dbk::gnp_generate(n, p, dbk::mix64(9001, k));
    int w = oracle::omega(g);

    for (int s = 0; s < 6; ++s)
      for (int bounds : {1, 0})
        for (int reds : {1, 0}) {
          dbk::SolverConfig cfg;
          cfg.max_leaf_size = 8;
          cfg.backend = dbk::Backend::Exact;
          cfg.strategy = dbk::Strategy(s);
          if (bounds) {
            cfg.upper_bounds = ub_on;
            cfg.lower_bounds = lb_on;
          } else {
            cfg.upper_bounds.clear();
            cfg.lower_bounds.clear();
          }
          cfg.reductions = reds ? red_on : std::set<R>{};
          cfg.seed = dbk::mix64(k, uint64_t(s * 4 + bounds * 2 + reds));

          dbk::SolveReport r = dbk::dbk_solve(g, cfg);
          if (r.omega != w || !dbk::is_clique(g, r.clique) ||
              int(r.clique.size()) != r.omega || !r.exact) {
            fail(o, "panel " + std::to_string(k) + " strategy " +
                        std::to_string(s) + (bounds ? "" : " no-bounds") +
                        (reds ? "" : " no-reductions") + ": omega " +
                        std::to_string(r.omega) + " != " + std::to_string(w));
            return o;
          }
        }
  }
  return o;
}

// ---- 3: clique number is invariant across bound/reduction configs --------

Outcome check_config_invariance() {
  Outcome o;
  using U = dbk::UpperBoundKind;
  using L = dbk::LowerBoundKind;
  using R = dbk::ReductionKind;
  const U ubs[3] = {U::GreedyColoring, U::DenseEdge, U::Lovasz};
  const L lbs[2] = {L::GreedyClique, L::Sibling};
  const R reds[3] = {R::VertexKcore, R::EdgeKcore, R::Persistency};
  auto cache = std::make_shared<dbk::ThetaCache>();

  // every bound subset crossed with every reduction subset, on instances
  // drawn from the same panel as the reference check
  for (int j = 0; j < 8; ++j) {
    int k = 25 * j;
    int n = 10 + (k * 13) % 21;
    double p = 0.1 + 0.1 * (k % 9);
    dbk::Graph g = dbk::gnp_generate(n, p, dbk::mix64(9001, k));
    int w = oracle::omega(g);

    for (int bound_mask = 0; bound_mask < 32; ++bound_mask)
      for (int red_mask = 0; red_mask < 8; ++red_mask) {
        dbk::SolverConfig cfg;
        cfg.max_leaf_size = 8;
        cfg.backend = dbk::Backend::Exact;
        cfg.seed = k;
        cfg.theta_cache = cache;
        cfg.upper_bounds.clear();
        cfg.lower_bounds.clear();
        cfg.reductions.clear();
        for (int b = 0; b < 3; ++b)
          if (bound_mask & (1 << b)) cfg.upper_bounds.insert(ubs[b]);
        for (int b = 0; b < 2; ++b)
          if (bound_mask & (8 << b)) cfg.lower_bounds.insert(lbs[b]);
        for (int b = 0; b < 3; ++b)
          if (red_mask & (1 << b)) cfg.reductions.insert(reds[b]);

        dbk::SolveReport r = dbk::dbk_solve(g, cfg);
        if (r.omega != w) {
          fail(o, "panel " + std::to_string(k) + " bounds=" +
                      std::to_string(bound_mask) + " reductions=" +
                      std::to_string(red_mask) + ": omega " +
                      std::to_string(r.omega) + " != " + std::to_string(w));
          return o;
        }
      }
  }
  return o;
}

// ---- 4: clique encoding minimizers are exactly the maximum cliques -------

Outcome check_qubo_equivalence() {
  Outcome o;
  for (int k = 0; k < 300; ++k) {
    int n = 2 + k % 11;
    double p = 0.15 + 0.07 * (k % 10);
    dbk::Graph g = dbk::gnp_generate(n, p, dbk::mix64(5500, k));
    dbk::Qubo q = dbk::maxclique_to_qubo(g);
    oracle::QuboMinima minima = oracle::minimize(densify(q));
    std::vector<uint32_t> cliques = oracle::maximum_clique_masks(g);
    std::sort(minima.argmin_masks.begin(), minima.argmin_masks.end());
    std::sort(cliques.begin(), cliques.end());
    if (minima.argmin_masks != cliques ||
        minima.energy != -double(oracle::omega(g))) {
      fail(o, "instance " + std::to_string(k) + ": minimizers differ from cliques");
      break;
    }
  }
  return o;
}

// ---- 5: persistency fixings are sound, completions optimal ---------------

Outcome check_persistency() {
  Outcome o;
  for (int k = 0; k < 500 && o.ok; ++k) {
    int n = 2 + k % 15;
    dbk::Qubo q = random_qubo(n, dbk::mix64(6600, k));
    oracle::QuboMinima minima = oracle::minimize(densify(q));

    dbk::PersistencyResult strong = dbk::persistency(q);
    for (const dbk::Fixing& f : strong.fixings) {
      if (!f.strong) fail(o, "weak fixing from the strong-only pass");
      for (uint32_t mask : minima.argmin_masks)
        if (int((mask >> f.var) & 1) != f.value) {
          fail(o, "instance " + std::to_string(k) + ": strong fixing x" +
                      std::to_string(f.var) + "=" + std::to_string(f.value) +
                      " violated by an optimum");
          break;
        }
    }

    dbk::PersistencyResult weak = dbk::persistency(q, true);
    auto [y, ye] = dbk::brute_force_solve(weak.reduced);
    dbk::Assignment x(n, 0);
    for (const dbk::Fixing& f : weak.fixings) x[f.var] = uint8_t(f.value);
    for (size_t i = 0; i < weak.reduced_to_original.size(); ++i)
      x[weak.reduced_to_original[i]] = y[i];
    if (q.energy(x) != minima.energy || ye + weak.offset != minima.energy)
      fail(o, "instance " + std::to_string(k) + ": weak completion not optimal");

    // offset bookkeeping is exact for arbitrary completions
    dbk::SplitMix64 rng(k);
    for (int s = 0; s < 5; ++s) {
      dbk::Assignment yr(weak.reduced.num_vars());
      for (auto& b : yr) b = uint8_t(rng.next() & 1);
      dbk::Assignment xr(n, 0);
      for (const dbk::Fixing& f : weak.fixings) xr[f.var] = uint8_t(f.value);
      for (size_t i = 0; i < weak.reduced_to_original.size(); ++i)
        xr[weak.reduced_to_original[i]] = yr[i];
      if (q.energy(xr) != weak.reduced.energy(yr) + weak.offset)
        fail(o, "instance " + std::to_string(k) + ": offset identity broken");
    }
  }
  return o;
}

// ---- 6: theta bound certifies known values and sandwiches omega ----------

Outcome check_theta() {
  Outcome o;
  dbk::Graph c5(5);
  for (int i = 0; i < 5; ++i) c5.add_edge(i, (i + 1) % 5);
  auto v5 = dbk::lovasz_theta_complement(c5);
  if (!v5 || std::abs(*v5 - std::sqrt(5.0)) > 1e-3)
    fail(o, "pentagon value " + std::to_string(v5 ? *v5 : -1.0));

  for (int n = 3; n <= 10; ++n) {
    dbk::Graph kn(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) kn.add_edge(i, j);
    auto v = dbk::lovasz_theta_complement(kn);
    if (!v || std::abs(*v - double(n)) > 1e-3)
      fail(o, "K" + std::to_string(n) + " value " + std::to_string(v ? *v : -1.0));
  }

  for (int k = 0; k < 100 && o.ok; ++k) {
    int n = 2 + k % 15;
    double p = 0.2 + 0.06 * (k % 11);
    dbk::Graph g = dbk::gnp_generate(n, p, dbk::mix64(7800, k));
    int w = oracle::omega(g);
    int chi = chromatic_number(g);
    auto v = dbk::lovasz_theta_complement(g);
    auto ub = dbk::lovasz_theta_ub(g);
    if (!v || !ub) {
      fail(o, "refused instance " + std::to_string(k));
      break;
    }
    if (*v < double(w) - 1e-9 || *v > double(chi) + 0.01 || ub->value < w) {
      fail(o, "instance " + std::to_string(k) + ": value " + std::to_string(*v) +
                  " outside [" + std::to_string(w) + "," + std::to_string(chi) + "]");
      break;
    }
  }
  return o;
}

// ---- 7: time-to-solution model reproduces the calibration data -----------

Outcome check_tts() {
  Outcome o;
  if (std::abs(dbk::tts(1.0, 0.99) - 1.0) > 1e-12)
    fail(o, "tts(1, 0.99) != 1");
  if (std::abs(dbk::tts(2.0, 0.5) - 2.0 * std::log2(100.0)) > 1e-9)
    fail(o, "tts(2, 0.5) != 2*log2(100)");

  const dbk::TtsRow expected[9] = {
      {0.1, 0.007, 1.938, 0.127}, {0.2, 0.003, 2.057, 0.296},
      {0.3, 0.008, 2.317, 0.141}, {0.4, 0.015, 3.382, 0.105},
      {0.5, 0.020, 6.736, 0.152}, {0.6, 0.003, 6.981, 0.948},
      {0.7, 0.003, 4.975, 0.746}, {0.8, 0.007, 4.333, 0.273},
      {0.9, 0.012, 3.429, 0.137}};
  dbk::TtsModel m = dbk::TtsModel::builtin();
  if (m.rows().size() != 9) fail(o, "table row count");
  for (int i = 0; i < 9 && o.ok; ++i) {
    const dbk::TtsRow& row = m.lookup(expected[i].density);
    if (row.density != expected[i].density || row.p != expected[i].p ||
        row.t_run != expected[i].t_run ||
        row.tts_seconds != expected[i].tts_seconds)
      fail(o, "bucket " + std::to_string(expected[i].density) + " drifted");
  }
  return o;
}

// ---- 8: degree-guided splitting beats random splitting -------------------

Outcome check_strategy_direction() {
  Outcome o;
  double mean_lowest = 0.0, mean_random = 0.0;
  const int reps = 20;
  for (int rep = 0; rep < reps; ++rep) {
    dbk::Graph g = dbk::gnp_generate(80, 0.7, dbk::mix64(4242, rep));
    dbk::SolverConfig cfg;
    cfg.seed = dbk::mix64(17, rep);

    cfg.strategy = dbk::Strategy::LowestDegree;
    dbk::SolveReport low = dbk::dbk_solve(g, cfg);
    cfg.strategy = dbk::Strategy::Random;
    dbk::SolveReport rnd = dbk::dbk_solve(g, cfg);

    if (low.omega != rnd.omega) fail(o, "rep " + std::to_string(rep) + " omega mismatch");
    mean_lowest += double(low.subgraphs_generated) / reps;
    mean_random += double(rnd.subgraphs_generated) / reps;
  }
  if (mean_lowest > mean_random)
    fail(o, "mean subgraphs " + std::to_string(mean_lowest) + " (lowest-degree) > " +
                std::to_string(mean_random) + " (random)");
  return o;
}

// ---- 9: bounds and reductions do not increase the charged anneal time ----

Outcome check_charge_direction() {
  Outcome o;
  const int reps = 20;
  for (double density : {0.1, 0.9}) {
    double mean_full = 0.0, mean_plain = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      dbk::Graph g = dbk::gnp_generate(80, density, dbk::mix64(888, uint64_t(density * 10) * 100 + rep));

      dbk::SolverConfig full;
      full.seed = dbk::mix64(5, rep);
      dbk::SolveReport rf = dbk::dbk_solve(g, full);

      dbk::SolverConfig plain;
      plain.seed = full.seed;
      plain.upper_bounds.clear();
      plain.lower_bounds.clear();
      plain.reductions = {dbk::ReductionKind::EdgeKcore};
      dbk::SolveReport rp = dbk::dbk_solve(g, plain);

      if (rf.omega != rp.omega)
        fail(o, "density " + std::to_string(density) + " rep " + std::to_string(rep) +
                    " omega mismatch");
      mean_full += rf.charged_tts_seconds / reps;
      mean_plain += rp.charged_tts_seconds / reps;
    }
    if (mean_full > mean_plain)
      fail(o, "density " + std::to_string(density) + ": charged " +
                  std::to_string(mean_full) + " > " + std::to_string(mean_plain));
  }
  return o;
}

struct Check {
  const char* label;
  Outcome (*run)();
};

const Check kChecks[] = {
    {"named instances solve to their known clique numbers", check_named_instances},
    {"solver matches an independent reference on random panels", check_reference_panel},
    {"clique number is invariant across bound and reduction configs",
     check_config_invariance},
    {"clique encoding minimizers are exactly the maximum cliques",
     check_qubo_equivalence},
    {"persistency fixings are sound and completions optimal", check_persistency},
    {"theta bound certifies known values and sandwiches omega", check_theta},
    {"time-to-solution model reproduces the calibration data", check_tts},
    {"degree-guided splitting generates no more subproblems than random",
     check_strategy_direction},
    {"bounds and reductions do not increase the charged anneal time",
     check_charge_direction},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 9) {
      std::fprintf(stderr, "usage: %s [1..9]\n", argv[0]);
      return 2;
    }
  }
  bool all_ok = true;
  for (int i = 1; i <= 9; ++i) {
    if (only && i != only) continue;
    Outcome o = kChecks[i - 1].run();
    if (o.ok)
      std::printf("%d PASS %s\n", i, kChecks[i - 1].label);
    else
      std::printf("%d FAIL %s: %s\n", i, kChecks[i - 1].label, o.detail.c_str());
    all_ok = all_ok && o.ok;
  }
  return all_ok ? 0 : 1;
}
