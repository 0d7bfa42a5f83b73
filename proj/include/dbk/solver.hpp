#ifndef DBK_SOLVER_HPP
#define DBK_SOLVER_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <climits>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dbk/anneal.hpp"
#include "dbk/bounds.hpp"
#include "dbk/exact.hpp"
#include "dbk/graph.hpp"
#include "dbk/kcore.hpp"
#include "dbk/persistency.hpp"
#include "dbk/qubo.hpp"
#include "dbk/rng.hpp"
#include "dbk/theta.hpp"

namespace dbk {

// The solver decomposes a graph by repeatedly splitting on a vertex v into
// the subgraph induced by v's neighborhood (v joins the branch's anchor set)
// and the graph with v removed, until subproblems fit the leaf capacity.
// Correctness rests on omega(G) = max(omega(N(v)) + 1, omega(G - v)); bounds
// and reductions only discard branches that provably cannot beat the
// incumbent clique.

enum class Strategy {
  LowestDegree,
  MedianDegree,
  Random,
  HighestDegree,
  KcoreRemoval,
  LowestDegreeSparsestGv,
};

enum class Backend { Exact, Sa, EmulatedAnnealer };

enum class UpperBoundKind { GreedyColoring, DenseEdge, Lovasz };
enum class LowerBoundKind { GreedyClique, Sibling };
enum class ReductionKind { VertexKcore, EdgeKcore, Persistency };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::LowestDegree: return "lowest-degree";
    case Strategy::MedianDegree: return "median-degree";
    case Strategy::Random: return "random";
    case Strategy::HighestDegree: return "highest-degree";
    case Strategy::KcoreRemoval: return "kcore-removal";
    case Strategy::LowestDegreeSparsestGv: return "lowest-degree-sparsest-gv";
  }
  return "?";
}

inline const char* to_string(Backend b) {
  switch (b) {
    case Backend::Exact: return "exact";
    case Backend::Sa: return "sa";
    case Backend::EmulatedAnnealer: return "emulated-annealer";
  }
  return "?";
}

inline const char* to_string(UpperBoundKind k) {
  switch (k) {
    case UpperBoundKind::GreedyColoring: return "greedy-coloring";
    case UpperBoundKind::DenseEdge: return "dense-edge";
    case UpperBoundKind::Lovasz: return "lovasz";
  }
  return "?";
}

inline const char* to_string(LowerBoundKind k) {
  switch (k) {
    case LowerBoundKind::GreedyClique: return "greedy-clique";
    case LowerBoundKind::Sibling: return "sibling";
  }
  return "?";
}

inline const char* to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::VertexKcore: return "vertex-kcore";
    case ReductionKind::EdgeKcore: return "edge-kcore";
    case ReductionKind::Persistency: return "persistency";
  }
  return "?";
}

struct SolverConfig {
  int max_leaf_size = 46;
  Strategy strategy = Strategy::LowestDegree;
  std::set<UpperBoundKind> upper_bounds{UpperBoundKind::GreedyColoring,
                                        UpperBoundKind::DenseEdge};
  std::set<LowerBoundKind> lower_bounds{LowerBoundKind::GreedyClique,
                                        LowerBoundKind::Sibling};
  std::set<ReductionKind> reductions{ReductionKind::VertexKcore,
                                     ReductionKind::EdgeKcore};
  Backend backend = Backend::EmulatedAnnealer;
  uint64_t seed = 0;
  int lovasz_cutoff = 60;
  double lovasz_tol = 1e-3;
  double dense_threshold = 0.8;
  int workers = 1;
  bool trace = false;
  bool legacy_edge_threshold = false;  // historical common-neighbor cutoff
  SaParams sa;
  TtsModel tts_model = TtsModel::builtin();
  std::shared_ptr<ThetaCache> theta_cache;  // optional memo shared across solves

  bool has(UpperBoundKind k) const { return upper_bounds.count(k) > 0; }
  bool has(LowerBoundKind k) const { return lower_bounds.count(k) > 0; }
  bool has(ReductionKind k) const { return reductions.count(k) > 0; }

  // Stable identifier of everything that shapes results (seed excluded, it
  // is reported separately).
  std::string fingerprint() const {
    std::ostringstream s;
    s << "leaf=" << max_leaf_size << ";strategy=" << to_string(strategy) << ";ub=";
    for (auto k : upper_bounds) s << to_string(k) << ",";
    s << ";lb=";
    for (auto k : lower_bounds) s << to_string(k) << ",";
    s << ";red=";
    for (auto k : reductions) s << to_string(k) << ",";
    s << ";backend=" << to_string(backend) << ";cutoff=" << lovasz_cutoff
      << ";ltol=" << lovasz_tol << ";dense=" << dense_threshold
      << ";legacy=" << legacy_edge_threshold << ";sweeps=" << sa.sweeps
      << ";restarts=" << sa.restarts;
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s.str()) h = (h ^ uint64_t(uint8_t(c))) * 0x100000001b3ULL;
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
  }
};

class BackendError : public std::runtime_error {
 public:
  explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

struct TraceEvent {
  enum class Kind { Open, Reduce, Bound, Prune, Leaf, Split, Incumbent };
  Kind kind;
  uint64_t node = 0;  // path id of the tree node
  int depth = 0;
  int size = 0;     // vertex count at the event
  int anchors = 0;  // anchor count at the event
  int value = 0;    // bound value / incumbent size / split vertex
  double charge = 0.0;
  std::string note;
};

struct SolveReport {
  int omega = 0;
  VertexSet clique;  // vertex ids of the input graph
  uint64_t subgraphs_generated = 0;
  uint64_t subgraphs_pruned = 0;
  uint64_t leaves_solved = 0;
  double charged_tts_seconds = 0.0;
  double wall_seconds = 0.0;
  bool exact = true;
  std::vector<TraceEvent> trace;
};

struct Incumbent {
  VertexSet clique;
};

// Pure incumbent step: candidates are verified against the graph before they
// can replace the current best; a non-clique candidate is an internal error.
inline Incumbent incumbent_update(const Graph& g, const Incumbent& cur,
                                  const VertexSet& candidate) {
  if (!is_clique(g, candidate))
    throw std::logic_error("incumbent_update: candidate is not a clique");
  if (candidate.size() > cur.clique.size()) return Incumbent{candidate};
  return cur;
}

// CH-partitioning step: (subgraph on N(v), graph without v).  Labels in the
// first part compose, so its vertices still name vertices of g's origin.
inline std::pair<Graph, Graph> split(const Graph& g, int v) {
  return {neighborhood_subgraph(g, v), remove_vertex(g, v)};
}

// Splitting vertex choice.  All strategies resolve ties uniformly at random
// from `seed`, which the solver derives per tree node so that runs are
// reproducible and traversals comparable across configurations.
inline int select_vertex(const Graph& g, Strategy strategy, uint64_t seed) {
  int n = g.size();
  if (n == 0) throw std::invalid_argument("select_vertex: empty graph");
  SplitMix64 rng(seed);
  std::vector<int> deg = g.degrees();
  auto pick = [&](const VertexSet& c) { return c[rng.next_below(c.size())]; };
  auto extremes = [&](bool low) {
    int best = low ? INT_MAX : -1;
    VertexSet c;
    for (int v = 0; v < n; ++v) {
      if ((low && deg[v] < best) || (!low && deg[v] > best)) {
        best = deg[v];
        c.clear();
      }
      if (deg[v] == best) c.push_back(v);
    }
    return c;
  };
  switch (strategy) {
    case Strategy::LowestDegree:
      return pick(extremes(true));
    case Strategy::HighestDegree:
      return pick(extremes(false));
    case Strategy::MedianDegree: {
      std::vector<int> sorted = deg;
      std::sort(sorted.begin(), sorted.end());
      int med = sorted[(n + 1) / 2 - 1];  // ceil(n/2)-th order statistic
      VertexSet c;
      for (int v = 0; v < n; ++v)
        if (deg[v] == med) c.push_back(v);
      return pick(c);
    }
    case Strategy::Random:
      return int(rng.next_below(uint64_t(n)));
    case Strategy::KcoreRemoval: {
      // vertices peeled at the smallest k whose k-core loses anything
      for (int k = 1; k <= n; ++k) {
        VertexSet core = vertex_kcore(g, k);
        if (int(core.size()) == n) continue;
        VertexSet removed;
        size_t ci = 0;
        for (int v = 0; v < n; ++v) {
          if (ci < core.size() && core[ci] == v)
            ++ci;
          else
            removed.push_back(v);
        }
        return pick(removed);
      }
      return pick(extremes(true));  // unreachable for n >= 1
    }
    case Strategy::LowestDegreeSparsestGv: {
      VertexSet lows = extremes(true);
      double best = 2.0;
      VertexSet c;
      for (int v : lows) {
        double d = density(neighborhood_subgraph(g, v));
        if (d < best) {
          best = d;
          c.clear();
        }
        if (d == best) c.push_back(v);
      }
      return pick(c);
    }
  }
  throw std::invalid_argument("select_vertex: unknown strategy");
}

namespace detail {

constexpr uint64_t kSaltRoot = 0xD1B54A32D192ED03ULL;
constexpr uint64_t kSaltSelect = 0x8BB84B93962EACC9ULL;
constexpr uint64_t kSaltLowerBound = 0x2545F4914F6CDD1DULL;
constexpr uint64_t kSaltSa = 0x94D049BB133111EBULL;

struct EngineNode {
  Graph g;
  VertexSet anchors;  // root vertex ids committed to the clique on this branch
  int depth = 0;
  uint64_t path = 0;  // deterministic id: child streams derive from it
};

class Engine {
 public:
  Engine(const Graph& input, const SolverConfig& cfg,
         std::function<void(const Graph&, const VertexSet&)> leaf_sink = nullptr)
      : cfg_(cfg), leaf_sink_(std::move(leaf_sink)) {
    root_ = input;
    for (int v = 0; v < root_.size(); ++v) root_.set_label(v, v);
  }

  SolveReport run() {
    auto t0 = std::chrono::steady_clock::now();
    {
      EngineNode root;
      root.g = root_;
      root.depth = 0;
      root.path = mix64(cfg_.seed, kSaltRoot);
      push(std::move(root));
    }
    if (cfg_.workers <= 1) {
      while (!stack_.empty()) {
        EngineNode node = std::move(stack_.back());
        stack_.pop_back();
        process(std::move(node));
      }
    } else {
      run_parallel();
    }
    SolveReport r;
    r.omega = int(best_.size());
    r.clique = best_;
    r.subgraphs_generated = generated_;
    r.subgraphs_pruned = pruned_;
    r.leaves_solved = leaves_;
    r.charged_tts_seconds = charged_;
    r.exact = cfg_.backend != Backend::Sa && !leaf_sink_;
    r.trace = std::move(trace_);
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }

 private:
  void run_parallel() {
    std::vector<std::thread> pool;
    int nw = cfg_.workers;
    auto worker = [&]() {
      std::unique_lock<std::mutex> lk(work_mu_);
      for (;;) {
        work_cv_.wait(lk, [&] {
          return !stack_.empty() || (active_ == 0 && stack_.empty()) || error_;
        });
        if (error_ || (stack_.empty() && active_ == 0)) return;
        if (stack_.empty()) continue;
        EngineNode node = std::move(stack_.back());
        stack_.pop_back();
        ++active_;
        lk.unlock();
        try {
          process(std::move(node));
        } catch (...) {
          lk.lock();
          if (!error_) error_ = std::current_exception();
          stack_.clear();
          --active_;
          work_cv_.notify_all();
          continue;
        }
        lk.lock();
        --active_;
        work_cv_.notify_all();
      }
    };
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error_) std::rethrow_exception(error_);
  }

  void push(EngineNode node) {
    if (cfg_.workers <= 1) {
      stack_.push_back(std::move(node));
    } else {
      {
        std::lock_guard<std::mutex> lk(work_mu_);
        stack_.push_back(std::move(node));
      }
      work_cv_.notify_one();
    }
  }

  void emit(TraceEvent ev) {
    if (!cfg_.trace) return;
    std::lock_guard<std::mutex> lk(trace_mu_);
    trace_.push_back(std::move(ev));
  }

  int incumbent_size() const { return best_size_.load(std::memory_order_acquire); }

  void try_improve(const EngineNode& node, VertexSet candidate) {
    std::sort(candidate.begin(), candidate.end());
    if (!is_clique(root_, candidate))
      throw std::logic_error("solver: produced a non-clique candidate");
    std::lock_guard<std::mutex> lk(best_mu_);
    if (candidate.size() > best_.size()) {
      best_ = std::move(candidate);
      best_size_.store(int(best_.size()), std::memory_order_release);
      emit({TraceEvent::Kind::Incumbent, node.path, node.depth, node.g.size(),
            int(node.anchors.size()), int(best_.size()), 0.0, ""});
    }
  }

  // Anchor labels are root ids already; a subgraph clique joins them via its
  // label map.
  VertexSet with_anchors(const EngineNode& node, const VertexSet& sub_clique) {
    VertexSet out = node.anchors;
    for (int v : sub_clique) out.push_back(node.g.label(v));
    return out;
  }

  void process(EngineNode node) {
    emit({TraceEvent::Kind::Open, node.path, node.depth, node.g.size(),
          int(node.anchors.size()), 0, 0.0, ""});
    int a = int(node.anchors.size());

    // --- reductions ---------------------------------------------------
    if (cfg_.has(ReductionKind::VertexKcore)) {
      int k = incumbent_size() - a;
      if (k > 0 && node.g.size() > 0) {
        VertexSet core = vertex_kcore(node.g, k);
        if (int(core.size()) < node.g.size()) {
          node.g = induced_subgraph(node.g, core);
          emit({TraceEvent::Kind::Reduce, node.path, node.depth, node.g.size(), a, k,
                0.0, "vertex-kcore"});
        }
      }
    }
    if (cfg_.has(ReductionKind::EdgeKcore)) {
      int bound = incumbent_size() - a;
      if (bound >= 2 && node.g.size() > 0) {
        Graph h = edge_kcore(node.g, bound, cfg_.legacy_edge_threshold);
        if (h.edge_count() < node.g.edge_count()) {
          node.g = std::move(h);
          emit({TraceEvent::Kind::Reduce, node.path, node.depth, node.g.size(), a,
                bound, 0.0, "edge-kcore"});
        }
      }
    }
    if (cfg_.has(ReductionKind::Persistency) && node.g.size() > 0) {
      PersistencyResult pr = persistency(maxclique_to_qubo(node.g));
      if (!pr.fixings.empty()) {
        std::vector<char> fixed(node.g.size(), 0);
        VertexSet ones;
        for (const Fixing& f : pr.fixings) {
          fixed[f.var] = 1;
          if (f.value == 1) ones.push_back(f.var);
        }
        Bitset survivors(node.g.size());
        for (int v = 0; v < node.g.size(); ++v)
          if (!fixed[v]) survivors.set(v);
        for (int v : ones) {
          node.anchors.push_back(node.g.label(v));
          survivors &= node.g.neighbors(v);
        }
        node.g = induced_subgraph(node.g, survivors.to_vector());
        a = int(node.anchors.size());
        emit({TraceEvent::Kind::Reduce, node.path, node.depth, node.g.size(), a,
              int(pr.fixings.size()), 0.0, "persistency"});
      }
    }
    if (node.g.size() == 0) {
      // branch fully resolved by reductions: the anchors are the clique
      try_improve(node, node.anchors);
      return;
    }

    // --- lower bounds -------------------------------------------------
    if (cfg_.has(LowerBoundKind::GreedyClique)) {
      BoundResult lb = greedy_clique_lb(node.g, mix64(node.path, kSaltLowerBound));
      emit({TraceEvent::Kind::Bound, node.path, node.depth, node.g.size(), a,
            lb.value, 0.0, lb.method});
      if (a + lb.value > incumbent_size()) try_improve(node, with_anchors(node, lb.witness));
    }

    // --- upper bounds, cheapest first; prune when it cannot beat L ----
    int target = incumbent_size() - a;
    bool prune = false;
    std::string prune_by;
    int prune_val = 0;
    auto consider = [&](const BoundResult& ub) {
      emit({TraceEvent::Kind::Bound, node.path, node.depth, node.g.size(), a, ub.value,
            0.0, ub.method});
      if (!prune && ub.value <= target) {
        prune = true;
        prune_by = ub.method;
        prune_val = ub.value;
      }
    };
    if (cfg_.has(UpperBoundKind::DenseEdge) && density(node.g) > cfg_.dense_threshold)
      consider(dense_edge_ub(node.g));
    if (!prune && cfg_.has(UpperBoundKind::GreedyColoring))
      consider(greedy_coloring_ub(node.g));
    if (!prune && cfg_.has(UpperBoundKind::Lovasz)) {
      ThetaOptions opt;
      opt.tol = cfg_.lovasz_tol;
      opt.cutoff = cfg_.lovasz_cutoff;
      auto theta = lovasz_theta_ub(node.g, opt, cfg_.theta_cache.get());
      if (theta)
        consider(*theta);
      else if (!cfg_.has(UpperBoundKind::GreedyColoring))
        consider(greedy_coloring_ub(node.g));  // refusal falls back
    }
    if (prune) {
      if (node.depth > 0) ++pruned_;
      emit({TraceEvent::Kind::Prune, node.path, node.depth, node.g.size(), a, prune_val,
            0.0, prune_by});
      return;
    }

    // --- leaf ---------------------------------------------------------
    if (node.g.size() <= cfg_.max_leaf_size) {
      if (leaf_sink_) {
        {
          std::lock_guard<std::mutex> lk(sink_mu_);
          leaf_sink_(node.g, node.anchors);
        }
        ++leaves_;
        emit({TraceEvent::Kind::Leaf, node.path, node.depth, node.g.size(), a, 0, 0.0,
              "sink"});
        return;
      }
      VertexSet clique;
      double charge = 0.0;
      try {
        switch (cfg_.backend) {
          case Backend::Exact:
            clique = exact_max_clique(node.g);
            break;
          case Backend::Sa: {
            auto sa = simulated_annealing_solve(maxclique_to_qubo(node.g),
                                                mix64(node.path, kSaltSa), cfg_.sa);
            clique = repair_to_clique(node.g, sa.first);
            break;
          }
          case Backend::EmulatedAnnealer: {
            AnnealOutcome out =
                emulated_annealer_solve(node.g, cfg_.tts_model, cfg_.max_leaf_size);
            clique = std::move(out.clique);
            charge = out.charged_seconds;
            break;
          }
        }
      } catch (const std::exception& e) {
        throw BackendError("backend '" + std::string(to_string(cfg_.backend)) +
                           "' failed on subproblem (n=" + std::to_string(node.g.size()) +
                           ", depth=" + std::to_string(node.depth) + "): " + e.what());
      }
      ++leaves_;
      {
        std::lock_guard<std::mutex> lk(charge_mu_);
        charged_ += charge;
      }
      emit({TraceEvent::Kind::Leaf, node.path, node.depth, node.g.size(), a,
            int(clique.size()), charge, to_string(cfg_.backend)});
      try_improve(node, with_anchors(node, clique));
      return;
    }

    // --- split --------------------------------------------------------
    int v = select_vertex(node.g, cfg_.strategy, mix64(node.path, kSaltSelect));
    auto [gv, gp] = split(node.g, v);
    generated_ += 2;
    emit({TraceEvent::Kind::Split, node.path, node.depth, node.g.size(), a, v, 0.0,
          "split"});

    EngineNode child_v;
    child_v.g = std::move(gv);
    child_v.anchors = node.anchors;
    child_v.anchors.push_back(node.g.label(v));
    child_v.depth = node.depth + 1;
    child_v.path = mix64(node.path, 1);

    EngineNode child_p;
    child_p.g = std::move(gp);
    child_p.anchors = node.anchors;
    child_p.depth = node.depth + 1;
    child_p.path = mix64(node.path, 2);

    // LIFO stack: the later push runs first.  With the sibling bound the
    // anchored neighborhood child goes first so its cliques raise the
    // incumbent before the remainder graph is examined.
    if (cfg_.has(LowerBoundKind::Sibling)) {
      push(std::move(child_p));
      push(std::move(child_v));
    } else {
      push(std::move(child_v));
      push(std::move(child_p));
    }
  }

  static VertexSet repair_to_clique(const Graph& g, const Assignment& x) {
    VertexSet s;
    for (int v = 0; v < g.size(); ++v)
      if (x[v]) s.push_back(v);
    // drop the weakest member until the set is a clique
    for (;;) {
      int worst = -1, worst_deg = INT_MAX;
      bool ok = true;
      for (size_t i = 0; i < s.size(); ++i) {
        int d = 0;
        for (size_t j = 0; j < s.size(); ++j)
          if (i != j && g.adjacent(s[i], s[j])) ++d;
        if (d < int(s.size()) - 1) ok = false;
        if (d < worst_deg) {
          worst_deg = d;
          worst = int(i);
        }
      }
      if (ok || s.empty()) return s;
      s.erase(s.begin() + worst);
    }
  }

  SolverConfig cfg_;
  Graph root_;
  std::function<void(const Graph&, const VertexSet&)> leaf_sink_;

  std::deque<EngineNode> stack_;
  std::mutex work_mu_;
  std::condition_variable work_cv_;
  int active_ = 0;
  std::exception_ptr error_;

  std::mutex best_mu_;
  VertexSet best_;
  std::atomic<int> best_size_{0};

  std::atomic<uint64_t> generated_{0}, pruned_{0}, leaves_{0};
  std::mutex charge_mu_;
  double charged_ = 0.0;

  std::mutex trace_mu_;
  std::vector<TraceEvent> trace_;
  std::mutex sink_mu_;
};

}  // namespace detail

inline SolveReport dbk_solve(const Graph& g, const SolverConfig& cfg = {}) {
  detail::Engine engine(g, cfg);
  return engine.run();
}

// Decomposition-only mode: leaves are handed to `sink` (with their anchor
// sets, as input-graph vertex ids) instead of a backend.  Bounds and
// reductions still prune, so the subproblem stream matches what a solve
// would dispatch.
inline SolveReport dbk_decompose(const Graph& g, const SolverConfig& cfg,
                                 std::function<void(const Graph&, const VertexSet&)> sink) {
  detail::Engine engine(g, cfg, std::move(sink));
  return engine.run();
}

}  // namespace dbk

#endif  // DBK_SOLVER_HPP
