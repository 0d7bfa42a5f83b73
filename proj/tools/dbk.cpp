// Command-line harness: solve, decompose, gen, bench.
//
// Exit codes: 0 success, 2 input/config parse errors, 3 backend failures,
// 4 output I/O errors, 1 anything else.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dbk/dbk.hpp"

namespace {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct CommonOpts {
  int leaf_size = 46;
  std::string strategy = "lowest-degree";
  std::string bounds = "greedy-coloring+dense-edge+greedy-clique+sibling";
  std::string reductions = "vertex-kcore+edge-kcore";
  std::string backend = "emulated-annealer";
  uint64_t seed = 0;
  int workers = 1;
  std::string tts_csv;
  int lovasz_cutoff = 60;
  double dense_threshold = 0.8;
  bool legacy_edge = false;
  int sa_sweeps = 1000;
  int sa_restarts = 4;
};

int workers_from_env() {
  const char* w = std::getenv("DBK_WORKERS");
  if (!w) return 1;
  int v = std::atoi(w);
  return v >= 1 ? v : 1;
}

void add_common_flags(CLI::App* cmd, CommonOpts& o, bool with_sets = true) {
  o.workers = workers_from_env();
  cmd->add_option("--leaf-size", o.leaf_size,
                  "largest subproblem handed to the backend")
      ->check(CLI::PositiveNumber);
  if (with_sets) {
    cmd->add_option("--strategy", o.strategy,
                    "splitting vertex choice: lowest-degree, median-degree, random, "
                    "highest-degree, kcore-removal, lowest-degree-sparsest-gv");
    cmd->add_option("--bounds", o.bounds,
                    "'+'-joined set from greedy-coloring, dense-edge, lovasz, "
                    "greedy-clique, sibling; 'none' disables all");
    cmd->add_option("--reductions", o.reductions,
                    "'+'-joined set from vertex-kcore, edge-kcore, persistency; 'none'");
  }
  cmd->add_option("--backend", o.backend, "exact, sa, or emulated-annealer");
  cmd->add_option("--seed", o.seed, "root random seed");
  cmd->add_option("--workers", o.workers, "worker threads (default $DBK_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tts-table", o.tts_csv, "CSV overriding the built-in TTS table");
  cmd->add_option("--lovasz-cutoff", o.lovasz_cutoff,
                  "largest subgraph the theta bound accepts");
  cmd->add_option("--dense-threshold", o.dense_threshold,
                  "density above which the edge-count bound is consulted");
  cmd->add_flag("--legacy-edge-threshold", o.legacy_edge,
                "use the historical edge filter cutoff");
  cmd->add_option("--sa-sweeps", o.sa_sweeps, "annealing sweeps per restart");
  cmd->add_option("--sa-restarts", o.sa_restarts, "annealing restarts");
}

dbk::Strategy parse_strategy(const std::string& s) {
  using dbk::Strategy;
  for (Strategy v : {Strategy::LowestDegree, Strategy::MedianDegree, Strategy::Random,
                     Strategy::HighestDegree, Strategy::KcoreRemoval,
                     Strategy::LowestDegreeSparsestGv})
    if (s == dbk::to_string(v)) return v;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

dbk::Backend parse_backend(const std::string& s) {
  using dbk::Backend;
  for (Backend v : {Backend::Exact, Backend::Sa, Backend::EmulatedAnnealer})
    if (s == dbk::to_string(v)) return v;
  throw std::invalid_argument("unknown backend '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

void parse_bounds(const std::string& spec, std::set<dbk::UpperBoundKind>& ub,
                  std::set<dbk::LowerBoundKind>& lb) {
  ub.clear();
  lb.clear();
  if (spec == "none") return;
  for (const std::string& tok : split_list(spec, '+')) {
    if (tok == "greedy-coloring")
      ub.insert(dbk::UpperBoundKind::GreedyColoring);
    else if (tok == "dense-edge")
      ub.insert(dbk::UpperBoundKind::DenseEdge);
    else if (tok == "lovasz")
      ub.insert(dbk::UpperBoundKind::Lovasz);
    else if (tok == "greedy-clique")
      lb.insert(dbk::LowerBoundKind::GreedyClique);
    else if (tok == "sibling")
      lb.insert(dbk::LowerBoundKind::Sibling);
    else
      throw std::invalid_argument("unknown bound '" + tok + "'");
  }
}

std::set<dbk::ReductionKind> parse_reductions(const std::string& spec) {
  std::set<dbk::ReductionKind> out;
  if (spec == "none") return out;
  for (const std::string& tok : split_list(spec, '+')) {
    if (tok == "vertex-kcore")
      out.insert(dbk::ReductionKind::VertexKcore);
    else if (tok == "edge-kcore")
      out.insert(dbk::ReductionKind::EdgeKcore);
    else if (tok == "persistency")
      out.insert(dbk::ReductionKind::Persistency);
    else
      throw std::invalid_argument("unknown reduction '" + tok + "'");
  }
  return out;
}

dbk::SolverConfig build_config(const CommonOpts& o) {
  dbk::SolverConfig cfg;
  cfg.max_leaf_size = o.leaf_size;
  cfg.strategy = parse_strategy(o.strategy);
  parse_bounds(o.bounds, cfg.upper_bounds, cfg.lower_bounds);
  cfg.reductions = parse_reductions(o.reductions);
  cfg.backend = parse_backend(o.backend);
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.lovasz_cutoff = o.lovasz_cutoff;
  cfg.dense_threshold = o.dense_threshold;
  cfg.legacy_edge_threshold = o.legacy_edge;
  cfg.sa.sweeps = o.sa_sweeps;
  cfg.sa.restarts = o.sa_restarts;
  if (!o.tts_csv.empty()) cfg.tts_model = dbk::TtsModel::from_csv_file(o.tts_csv);
  return cfg;
}

nlohmann::json report_json(const std::string& instance, const dbk::Graph& g,
                           const dbk::SolverConfig& cfg, const dbk::SolveReport& r) {
  nlohmann::json j;
  j["instance"] = instance;
  j["n"] = g.size();
  j["m"] = g.edge_count();
  j["density"] = dbk::density(g);
  j["config"] = cfg.fingerprint();
  j["omega"] = r.omega;
  nlohmann::json clique = nlohmann::json::array();
  for (int v : r.clique) clique.push_back(g.label(v));
  j["clique"] = clique;
  j["subgraphs_generated"] = r.subgraphs_generated;
  j["subgraphs_pruned"] = r.subgraphs_pruned;
  j["leaves_solved"] = r.leaves_solved;
  j["charged_tts_seconds"] = r.charged_tts_seconds;
  j["wall_seconds"] = r.wall_seconds;
  j["seed"] = cfg.seed;
  j["exact"] = r.exact;
  return j;
}

void print_report_text(std::ostream& out, const dbk::Graph& g, const dbk::SolveReport& r) {
  out << "omega " << r.omega << "\n";
  out << "clique {";
  for (size_t i = 0; i < r.clique.size(); ++i)
    out << (i ? "," : "") << g.label(r.clique[i]);
  out << "}\n";
  out << "subgraphs_generated " << r.subgraphs_generated << "\n";
  out << "subgraphs_pruned " << r.subgraphs_pruned << "\n";
  out << "leaves_solved " << r.leaves_solved << "\n";
  out << std::fixed << std::setprecision(6);
  out << "charged_tts_seconds " << r.charged_tts_seconds << "\n";
  out << "wall_seconds " << r.wall_seconds << "\n";
  out.unsetf(std::ios::fixed);
  if (!r.exact) out << "exact false\n";
}

int cmd_solve(const std::string& path, const CommonOpts& opts, bool as_json,
              const std::string& out_path) {
  dbk::SolverConfig cfg = build_config(opts);
  dbk::Graph g = dbk::parse_dimacs_file(path);
  dbk::SolveReport r = dbk::dbk_solve(g, cfg);
  nlohmann::json j = report_json(path, g, cfg, r);
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw IoError("cannot write '" + out_path + "'");
    f << j.dump(2) << "\n";
  }
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    print_report_text(std::cout, g, r);
  return 0;
}

int cmd_decompose(const std::string& path, const CommonOpts& opts, int max_size,
                  const std::string& out_dir) {
  CommonOpts o = opts;
  o.leaf_size = max_size;
  dbk::SolverConfig cfg = build_config(o);
  dbk::Graph g = dbk::parse_dimacs_file(path);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());

  std::ofstream manifest(out_dir + "/manifest.csv");
  if (!manifest) throw IoError("cannot write manifest in '" + out_dir + "'");
  manifest << "leaf_id,file,n,m,density,anchor_count,anchors\n";
  uint64_t id = 0;
  auto sink = [&](const dbk::Graph& leaf, const dbk::VertexSet& anchors) {
    char name[32];
    snprintf(name, sizeof name, "leaf_%06llu.clq", (unsigned long long)id);
    std::string file = out_dir + "/" + name;
    std::ofstream f(file);
    if (!f) throw IoError("cannot write '" + file + "'");
    // leaf labels are solver-internal ids; translate to the input's 1-based ids
    dbk::Graph out = leaf;
    for (int v = 0; v < out.size(); ++v) out.set_label(v, g.label(out.label(v)));
    dbk::write_dimacs(out, f, /*with_labels=*/true);
    manifest << id << "," << name << "," << leaf.size() << "," << leaf.edge_count()
             << "," << std::fixed << std::setprecision(6) << dbk::density(leaf)
             << "," << anchors.size() << ",";
    manifest.unsetf(std::ios::fixed);
    for (size_t i = 0; i < anchors.size(); ++i)
      manifest << (i ? " " : "") << g.label(anchors[i]);
    manifest << "\n";
    ++id;
  };
  dbk::SolveReport r = dbk::dbk_decompose(g, cfg, sink);
  std::cout << "leaves " << id << "\n"
            << "subgraphs_generated " << r.subgraphs_generated << "\n"
            << "subgraphs_pruned " << r.subgraphs_pruned << "\n"
            << "manifest " << out_dir << "/manifest.csv"
            << "\n";
  return 0;
}

int cmd_gen(int n, double p, uint64_t seed, const std::string& out_path) {
  dbk::Graph g = dbk::gnp_generate(n, p, seed);
  if (out_path.empty()) {
    dbk::write_dimacs(g, std::cout);
  } else {
    std::ofstream f(out_path);
    if (!f) throw IoError("cannot write '" + out_path + "'");
    dbk::write_dimacs(g, f);
  }
  return 0;
}

struct BenchRun {
  std::string instance;
  double requested_density = 0.0;
  uint64_t instance_seed = 0;
  dbk::SolverConfig cfg;
};

int cmd_bench(const CommonOpts& opts, int n, const std::string& densities, int reps,
              const std::string& strategies, const std::string& bound_sets,
              const std::string& reduction_sets, const std::string& out_path) {
  // density range a:b:step, inclusive of b up to rounding slack
  std::vector<double> dens;
  {
    auto parts = split_list(densities, ':');
    if (parts.size() != 3) throw std::invalid_argument("--densities expects a:b:step");
    double a = std::stod(parts[0]), b = std::stod(parts[1]), step = std::stod(parts[2]);
    if (step <= 0) throw std::invalid_argument("--densities step must be positive");
    for (double d = a; d <= b + step * 1e-6; d += step) dens.push_back(d);
  }
  std::vector<std::string> strat_list = split_list(strategies, ',');
  std::vector<std::string> bset_list = split_list(bound_sets, ',');
  std::vector<std::string> rset_list = split_list(reduction_sets, ',');
  if (strat_list.empty() || bset_list.empty() || rset_list.empty())
    throw std::invalid_argument("empty strategy, bound, or reduction list");

  std::vector<BenchRun> runs;
  for (size_t di = 0; di < dens.size(); ++di)
    for (int rep = 0; rep < reps; ++rep) {
      uint64_t iseed = dbk::mix64(dbk::mix64(opts.seed, uint64_t(di)), uint64_t(rep));
      for (const std::string& st : strat_list)
        for (const std::string& bs : bset_list)
          for (const std::string& rs : rset_list) {
            CommonOpts o = opts;
            o.strategy = st;
            o.bounds = bs;
            o.reductions = rs;
            o.seed = iseed;
            o.workers = 1;  // parallelism is across runs
            BenchRun run;
            run.cfg = build_config(o);
            run.requested_density = dens[di];
            run.instance_seed = iseed;
            char buf[64];
            snprintf(buf, sizeof buf, "gnp-n%d-d%g-r%d", n, dens[di], rep);
            run.instance = buf;
            runs.push_back(std::move(run));
          }
    }

  struct Row {
    std::string text;
  };
  std::vector<Row> rows(runs.size());
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      const BenchRun& run = runs[i];
      dbk::Graph g = dbk::gnp_generate(n, run.requested_density, run.instance_seed);
      dbk::SolveReport r = dbk::dbk_solve(g, run.cfg);
      std::ostringstream line;
      line << run.instance << "," << g.size() << "," << g.edge_count() << ","
           << std::fixed << std::setprecision(6) << dbk::density(g) << ","
           << run.cfg.fingerprint() << "," << r.omega << "," << r.subgraphs_generated
           << "," << r.subgraphs_pruned << "," << std::setprecision(6)
           << r.charged_tts_seconds << "," << r.wall_seconds << ","
           << run.instance_seed;
      rows[i].text = line.str();
    }
  };
  int nw = std::max(1, opts.workers);
  if (nw == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::ostringstream csv;
  csv << "instance,n,m,density,config,omega,subgraphs_generated,subgraphs_pruned,"
         "charged_tts_seconds,wall_seconds,seed\n";
  for (const Row& row : rows) csv << row.text << "\n";
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw IoError("cannot write '" + out_path + "'");
    f << csv.str();
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decomposition-based maximum clique solver"};
  app.require_subcommand(1);

  CommonOpts solve_opts;
  std::string solve_path, solve_out;
  bool solve_json = false;
  CLI::App* solve = app.add_subcommand("solve", "solve a DIMACS instance");
  solve->add_option("graph", solve_path, "DIMACS file")->required();
  solve->add_flag("--json", solve_json, "emit a JSON report on stdout");
  solve->add_option("--out", solve_out, "also write the JSON report to a file");
  add_common_flags(solve, solve_opts);

  CommonOpts dec_opts;
  std::string dec_path, dec_out;
  int dec_max = 46;
  CLI::App* dec = app.add_subcommand("decompose",
                                     "write hardware-sized subproblems and a manifest");
  dec->add_option("graph", dec_path, "DIMACS file")->required();
  dec->add_option("--max-size", dec_max, "subproblem capacity")->required();
  dec->add_option("--out", dec_out, "output directory")->required();
  add_common_flags(dec, dec_opts);

  int gen_n = 0;
  double gen_p = 0.0;
  uint64_t gen_seed = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "generate a random graph");
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--p", gen_p, "edge probability")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  CommonOpts bench_opts;
  int bench_n = 80, bench_reps = 1;
  std::string bench_densities = "0.1:0.9:0.1";
  std::string bench_strategies = "lowest-degree";
  std::string bench_bounds = "greedy-coloring+dense-edge+greedy-clique+sibling";
  std::string bench_reductions = "vertex-kcore+edge-kcore";
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "sweep random instances to CSV");
  bench->add_option("--n", bench_n, "vertex count");
  bench->add_option("--densities", bench_densities, "range a:b:step");
  bench->add_option("--reps", bench_reps, "instances per density")
      ->check(CLI::PositiveNumber);
  bench->add_option("--strategies", bench_strategies, "comma list of strategies");
  bench->add_option("--bounds", bench_bounds,
                    "comma list of '+'-joined bound sets (or 'none')");
  bench->add_option("--reductions", bench_reductions,
                    "comma list of '+'-joined reduction sets (or 'none')");
  bench->add_option("--out", bench_out, "CSV file (default stdout)");
  add_common_flags(bench, bench_opts, /*with_sets=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_path, solve_opts, solve_json, solve_out);
    if (dec->parsed()) return cmd_decompose(dec_path, dec_opts, dec_max, dec_out);
    if (gen->parsed()) return cmd_gen(gen_n, gen_p, gen_seed, gen_out);
    if (bench->parsed())
      return cmd_bench(bench_opts, bench_n, bench_densities, bench_reps,
                       bench_strategies, bench_bounds, bench_reductions, bench_out);
  } catch (const dbk::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dbk::BackendError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
