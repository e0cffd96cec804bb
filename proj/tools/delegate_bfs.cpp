#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dbfs/cost_model.hpp"
#include "dbfs/edge_io.hpp"
#include "dbfs/engine.hpp"
#include "dbfs/errors.hpp"
#include "dbfs/oracle.hpp"
#include "dbfs/partitioner.hpp"
#include "dbfs/report.hpp"
#include "dbfs/rmat.hpp"
#include "dbfs/subgraph.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace dbfs;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

// Raised when a command finds a broken invariant; maps to exit code 1.
struct Violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string config;
  unsigned scale = 12;
  unsigned edge_factor = 16;
  std::uint64_t seed = 1;
  std::string theta = "auto";
  std::string shape = "1x1x1";
  std::string mode = "dobfs";
  std::string factors = "0.5,0.05,1e-7";
  std::string direction_scope = "global";
  bool local_all2all = false;
  bool uniquify = false;
  bool no_switch_back = false;
  std::uint32_t sources = 0;
  std::optional<VertexId> source;
  std::string graph;
  std::string out;
  bool timing = false;
  std::string thetas = "16,32,64,128,256";
  std::string p_list = "16,64,256,1024,4096";
};

// Options a config file may set, keyed by the JSON field name.
struct Bound {
  std::string key;
  CLI::Option* option;
};

std::vector<Bound> add_graph_options(CLI::App& cmd, Settings& s) {
  std::vector<Bound> b;
  b.push_back({"scale", cmd.add_option("--scale", s.scale, "RMAT scale (n = 2^scale)")});
  b.push_back({"edge_factor", cmd.add_option("--edge-factor", s.edge_factor, "RMAT edges per vertex")});
  b.push_back({"seed", cmd.add_option("--seed", s.seed, "Generator and source-selection seed")});
  b.push_back({"graph", cmd.add_option("--graph", s.graph, "Edge list file or partition directory")});
  return b;
}

std::vector<Bound> add_partition_options(CLI::App& cmd, Settings& s) {
  auto b = add_graph_options(cmd, s);
  b.push_back({"theta", cmd.add_option("--theta", s.theta, "Delegate degree threshold or 'auto'")});
  b.push_back({"shape", cmd.add_option("--shape", s.shape, "Cluster shape NODESxRANKSxGPUS")});
  return b;
}

std::vector<Bound> add_run_options(CLI::App& cmd, Settings& s) {
  auto b = add_partition_options(cmd, s);
  b.push_back({"mode", cmd.add_option("--mode", s.mode, "bfs or dobfs")->check(CLI::IsMember({"bfs", "dobfs"}))});
  b.push_back({"factors", cmd.add_option("--factors", s.factors, "Switching factors dd,dn,nd")});
  b.push_back({"direction_scope", cmd.add_option("--direction-scope", s.direction_scope, "global or local")
                                      ->check(CLI::IsMember({"global", "local"}))});
  b.push_back({"local_all2all", cmd.add_flag("--local-all2all", s.local_all2all, "Regroup records per rank first")});
  b.push_back({"uniquify", cmd.add_flag("--uniquify", s.uniquify, "Drop repeated records per bin")});
  b.push_back({"no_switch_back", cmd.add_flag("--no-switch-back", s.no_switch_back, "Never return to forward")});
  return b;
}

void add_common(CLI::App& cmd, Settings& s) {
  cmd.add_option("--config", s.config, "JSON file with default values for the flags");
  cmd.add_option("--out", s.out, "Output path (stdout when omitted)");
}

template <typename T>
T config_value(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

// Config values fill only the options that were not given on the command line.
void apply_config(const Settings& s, const std::vector<Bound>& bound, Settings& target) {
  if (s.config.empty()) return;
  std::ifstream in(s.config);
  if (!in) throw IoError("cannot open config " + s.config);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config", e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const Bound* match = nullptr;
    for (const Bound& b : bound) {
      if (b.key == key) match = &b;
    }
    if (key == "source") {
      if (!target.source) target.source = config_value<VertexId>(*it, key);
      continue;
    }
    if (key == "sources") {
      if (target.sources == 0) target.sources = config_value<std::uint32_t>(*it, key);
      continue;
    }
    if (key == "out") {
      if (target.out.empty()) target.out = config_value<std::string>(*it, key);
      continue;
    }
    if (!match) throw ConfigError(key, "unknown field");
    if (match->option->count() > 0) continue;
    const json& v = *it;
    if (key == "scale") target.scale = config_value<unsigned>(v, key);
    else if (key == "edge_factor") target.edge_factor = config_value<unsigned>(v, key);
    else if (key == "seed") target.seed = config_value<std::uint64_t>(v, key);
    else if (key == "graph") target.graph = config_value<std::string>(v, key);
    else if (key == "theta") target.theta = v.is_number() ? std::to_string(config_value<std::uint64_t>(v, key))
                                                          : config_value<std::string>(v, key);
    else if (key == "shape") target.shape = config_value<std::string>(v, key);
    else if (key == "mode") target.mode = config_value<std::string>(v, key);
    else if (key == "factors") target.factors = config_value<std::string>(v, key);
    else if (key == "direction_scope") target.direction_scope = config_value<std::string>(v, key);
    else if (key == "local_all2all") target.local_all2all = config_value<bool>(v, key);
    else if (key == "uniquify") target.uniquify = config_value<bool>(v, key);
    else if (key == "no_switch_back") target.no_switch_back = config_value<bool>(v, key);
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
  return out;
}

double parse_factor(const std::string& text, const std::string& field) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !(v >= 0)) throw ConfigError(field, "bad factor '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(field, "bad factor '" + text + "'");
  }
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& field) {
  std::vector<T> out;
  for (const auto& item : split(text, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(item, &used);
      if (used != item.size()) throw ConfigError(field, "bad value '" + item + "'");
      out.push_back(static_cast<T>(v));
    } catch (const std::logic_error&) {
      throw ConfigError(field, "bad value '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(field, "empty list");
  return out;
}

unsigned scale_of(VertexId n) {
  unsigned s = 0;
  while ((VertexId{1} << s) < n) ++s;
  return s;
}

std::uint64_t resolve_theta(const Settings& s, VertexId n) {
  if (s.theta == "auto") return auto_theta(s.graph.empty() ? s.scale : scale_of(n));
  const auto v = parse_list<std::uint64_t>(s.theta, "theta");
  if (v.size() != 1) throw ConfigError("theta", "expected one value or 'auto'");
  return v.front();
}

EdgeList load_graph(const Settings& s) {
  if (s.graph.empty()) {
    RmatParams p;
    p.scale = s.scale;
    p.edge_factor = s.edge_factor;
    p.seed = s.seed;
    return make_rmat_graph(p);
  }
  const fs::path path(s.graph);
  if (fs::is_directory(path)) throw ConfigError("graph", "expected an edge list file, got a directory");
  return load_edge_list(path, format_for_path(path));
}

// A partition directory is loaded as is; anything else is generated or read
// and then partitioned.
PartitionedGraph load_partitioned(const Settings& s, std::optional<EdgeList>* edges = nullptr) {
  if (!s.graph.empty() && fs::is_directory(s.graph)) return load_partitioned_graph(s.graph);
  EdgeList g = load_graph(s);
  PartitionedGraph pg = partition_graph(g, resolve_theta(s, g.n), ClusterShape::parse(s.shape));
  if (edges) *edges = std::move(g);
  return pg;
}

BfsOptions run_options(const Settings& s) {
  BfsOptions o;
  o.mode = s.mode == "bfs" ? Mode::bfs : Mode::dobfs;
  o.direction_scope = s.direction_scope == "local" ? DirectionScope::local : DirectionScope::global;
  const auto parts = split(s.factors, ',');
  if (parts.size() != kDoKinds) throw ConfigError("factors", "expected three values dd,dn,nd");
  for (std::size_t k = 0; k < kDoKinds; ++k) {
    const double f0 = parse_factor(parts[k], "factors");
    o.factors[k] = {f0, f0 / 10};
  }
  o.allow_switch_back = !s.no_switch_back;
  o.comm.local_all2all = s.local_all2all;
  o.comm.uniquify = s.uniquify;
  o.seed = s.seed;
  return o;
}

// Sources with at least one edge, drawn reproducibly from the seed.
std::vector<VertexId> pick_sources(const PartitionedGraph& pg, const EdgeList* g, std::uint32_t count,
                                   std::uint64_t seed) {
  std::vector<std::uint8_t> has_edge(pg.n, 0);
  if (g) {
    for (const Edge& e : g->edges) has_edge[e.src] = 1;
  } else {
    for (const Edge& e : reconstruct_edges(pg).edges) has_edge[e.src] = 1;
  }
  std::vector<VertexId> out;
  for (std::uint64_t round = 0; out.size() < count && round < 64; ++round) {
    for (VertexId v : random_sources(pg.n, 4 * count, seed + round)) {
      if (has_edge[v] && out.size() < count) out.push_back(v);
    }
  }
  if (out.size() < count) throw DomainError("could not find enough sources with edges");
  return out;
}

void write_text(const Settings& s, const std::string& text) {
  if (s.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(s.out, std::ios::binary);
  if (!out) throw IoError("cannot write " + s.out);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

void write_json(const Settings& s, const json& j) { write_text(s, j.dump(2)); }

int cmd_generate(const Settings& s) {
  const EdgeList g = load_graph(s);
  json j = {{"n", g.n}, {"m", g.m()}, {"scale", s.scale}, {"edge_factor", s.edge_factor}, {"seed", s.seed}};
  if (!s.out.empty()) {
    write_edge_list(g, s.out, format_for_path(s.out));
    j["path"] = s.out;
    std::cout << j.dump(2) << '\n';
  } else {
    write_json(s, j);
  }
  return 0;
}

int cmd_partition(const Settings& s) {
  const EdgeList g = load_graph(s);
  const std::uint64_t theta = resolve_theta(s, g.n);
  const ClusterShape shape = ClusterShape::parse(s.shape);
  const VertexClassification cls = classify_vertices(compute_out_degrees(g), theta);
  const EdgeBuckets buckets = distribute_edges(g, cls, shape);
  const BucketReport check = verify_buckets(buckets, cls);
  const PartitionedGraph pg = build_partitioned_graph(buckets, cls, g.m());

  json j = graph_params(pg);
  j["delegate_fraction"] = g.n ? double(pg.d()) / double(g.n) : 0.0;
  j["nn_fraction"] = g.m() ? double(pg.kind_total(SubgraphKind::nn)) / double(g.m()) : 0.0;
  j["symmetric"] = check.symmetric;
  j["bounded"] = check.bounded;
  j["imbalance"] = check.imbalance;
  j["violations"] = check.violations.size();
  j["memory"] = to_json(memory_footprint(pg));
  if (!s.out.empty()) {
    save_partitioned_graph(pg, s.out);
    j["directory"] = s.out;
  }
  std::cout << j.dump(2) << '\n';
  if (!check.ok()) {
    const auto& v = check.violations.front();
    throw Violation("worker " + std::to_string(v.worker) + ": " + v.what);
  }
  return 0;
}

int cmd_run(const Settings& s) {
  std::optional<EdgeList> g;
  const PartitionedGraph pg = load_partitioned(s, &g);
  const BfsOptions base = run_options(s);
  if (s.sources <= 1) {
    BfsOptions o = base;
    o.source = s.source ? *s.source : pick_sources(pg, g ? &*g : nullptr, 1, s.seed).front();
    const BfsRun run = run_bfs(pg, o);
    write_json(s, run_report(pg, o, run, s.timing));
    return 0;
  }
  json runs = json::array();
  std::vector<double> rates;
  for (VertexId src : pick_sources(pg, g ? &*g : nullptr, s.sources, s.seed)) {
    BfsOptions o = base;
    o.source = src;
    const BfsRun run = run_bfs(pg, o);
    json r = {{"source", src},
              {"iterations", run.iterations},
              {"reached", run.reached()},
              {"inspections", run.inspections.total()},
              {"s_prime", run.comm.reductions()},
              {"mask_bytes", run.comm.mask_bytes()},
              {"normal_bytes", run.comm.normal_bytes()},
              {"levels_digest", hex_digest(run.levels_digest())}};
    if (s.timing) r["teps"] = run.teps;
    if (run.iterations > 1 && run.teps > 0) rates.push_back(run.teps);
    runs.push_back(r);
  }
  json j = {{"params", graph_params(pg)}, {"runs", runs}};
  if (s.timing && !rates.empty()) j["geomean_teps"] = geometric_mean(rates);
  write_json(s, j);
  return 0;
}

int cmd_verify(const Settings& s) {
  if (!s.graph.empty() && fs::is_directory(s.graph)) {
    throw ConfigError("graph", "verify needs the edge list, not a partition directory");
  }
  std::optional<EdgeList> g;
  const PartitionedGraph pg = load_partitioned(s, &g);
  const std::uint32_t count = s.sources == 0 ? 20 : s.sources;
  const BfsOptions base = run_options(s);
  std::uint32_t mismatches = 0;
  json failures = json::array();
  const bool edges_ok = oracle::same_multiset(reconstruct_edges(pg).edges, g->edges);
  for (VertexId src : pick_sources(pg, &*g, count, s.seed)) {
    BfsOptions o = base;
    o.source = src;
    const BfsRun run = run_bfs(pg, o);
    const auto expect = oracle::reference_bfs(*g, src);
    const std::uint64_t mask_law = 2ull * pg.d() * pg.shape.p_rank * run.comm.reductions();
    if (run.levels != expect || run.comm.mask_bits() != mask_law) {
      ++mismatches;
      failures.push_back(src);
    }
  }
  write_json(s, {{"params", graph_params(pg)},
                 {"sources", count},
                 {"mismatches", mismatches},
                 {"failed_sources", failures},
                 {"edges_preserved", edges_ok}});
  if (!edges_ok) throw Violation("partition does not preserve the edge multiset");
  if (mismatches > 0) throw Violation(std::to_string(mismatches) + " sources disagree with the oracle");
  return 0;
}

int cmd_memory(const Settings& s) {
  const PartitionedGraph pg = load_partitioned(s);
  json j = graph_params(pg);
  j["memory"] = to_json(memory_footprint(pg));
  write_json(s, j);
  return 0;
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Projects a measured run onto the p sweep, keeping per-worker size fixed.
int cmd_cost(const Settings& s) {
  std::optional<EdgeList> g;
  const PartitionedGraph pg = load_partitioned(s, &g);
  BfsOptions o = run_options(s);
  o.source = s.source ? *s.source : pick_sources(pg, g ? &*g : nullptr, 1, s.seed).front();
  const BfsRun run = run_bfs(pg, o);

  CostModelParams base;
  base.n = double(pg.n);
  base.m = double(pg.m);
  base.p_rank = pg.shape.p_rank;
  base.p_gpu = pg.shape.p_gpu;
  base.iterations = run.iterations;
  base.backward_iterations = run.backward_iterations;
  base.forward_visited = double(run.forward_visited);
  base.d = pg.d();
  base.e_nn = double(pg.kind_total(SubgraphKind::nn));

  const auto ps = parse_list<std::uint64_t>(s.p_list, "p-list");
  std::ostringstream csv;
  csv << "p,p_rank,p_gpu,n,m,d,e_nn,iterations,cost_1d_volume,cost_1d_time,cost_2d_volume,cost_2d_time,"
         "delegate_volume,delegate_time\n";
  for (const auto& row : weak_scaling_sweep(base, ps)) {
    const auto& c = row.params;
    csv << row.p << ',' << row.p_rank << ',' << c.p_gpu << ',' << csv_number(c.n) << ',' << csv_number(c.m) << ','
        << csv_number(c.d) << ',' << csv_number(c.e_nn) << ',' << csv_number(c.iterations) << ','
        << csv_number(row.one_d.volume) << ',' << csv_number(row.one_d.time) << ',';
    if (row.has_2d) {
      csv << csv_number(row.two_d.forward_volume + row.two_d.backward_volume) << ',' << csv_number(row.two_d.time);
    } else {
      csv << ',';
    }
    csv << ',' << csv_number(row.delegate.volume) << ',' << csv_number(row.delegate.time) << '\n';
  }
  write_text(s, csv.str());
  return 0;
}

int cmd_sweep_theta(const Settings& s) {
  const EdgeList g = load_graph(s);
  const ClusterShape shape = ClusterShape::parse(s.shape);
  const auto thetas = parse_list<std::uint64_t>(s.thetas, "thetas");
  const std::uint32_t count = s.sources == 0 ? 4 : s.sources;
  const BfsOptions base = run_options(s);
  std::ostringstream csv;
  csv << "theta,d,d_pct,e_nn_pct,footprint_bytes,teps\n";
  for (std::uint64_t theta : thetas) {
    const PartitionedGraph pg = partition_graph(g, theta, shape);
    const MemoryReport mem = memory_footprint(pg);
    std::string teps;
    if (s.timing) {
      const auto sources = pick_sources(pg, &g, count, s.seed);
      try {
        teps = csv_number(benchmark(pg, sources, base).geomean_teps);
      } catch (const EmptyReportError&) {
      }
    }
    csv << theta << ',' << pg.d() << ',' << csv_number(g.n ? 100.0 * pg.d() / double(g.n) : 0.0) << ','
        << csv_number(g.m() ? 100.0 * pg.kind_total(SubgraphKind::nn) / double(g.m()) : 0.0) << ','
        << mem.total_bytes << ',' << teps << '\n';
  }
  write_text(s, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delegate-partitioned breadth-first search on a simulated GPU cluster"};
  app.require_subcommand(1);
  Settings s;
  std::vector<Bound> bound;

  auto* gen = app.add_subcommand("generate", "Write an RMAT edge list");
  add_common(*gen, s);
  auto gen_bound = add_graph_options(*gen, s);

  auto* part = app.add_subcommand("partition", "Partition a graph and check the distribution");
  add_common(*part, s);
  auto part_bound = add_partition_options(*part, s);

  auto* run = app.add_subcommand("run", "Run BFS and write a JSON report");
  add_common(*run, s);
  auto run_bound = add_run_options(*run, s);
  run->add_option("--source", s.source, "Source vertex (a random connected one by default)");
  run->add_option("--sources", s.sources, "Number of random sources; more than one gives a summary");
  run->add_flag("--timing", s.timing, "Include wall-clock fields");

  auto* verify = app.add_subcommand("verify", "Compare BFS levels with a sequential oracle");
  add_common(*verify, s);
  auto verify_bound = add_run_options(*verify, s);
  verify->add_option("--sources", s.sources, "Number of random sources (default 20)");

  auto* cost = app.add_subcommand("cost", "Project a measured run through the cost models (CSV)");
  add_common(*cost, s);
  auto cost_bound = add_run_options(*cost, s);
  cost->add_option("--source", s.source, "Source vertex of the measured run");
  cost->add_option("--p-list", s.p_list, "Worker counts to sweep");

  auto* mem = app.add_subcommand("memory", "Report the storage footprint");
  add_common(*mem, s);
  auto mem_bound = add_partition_options(*mem, s);

  auto* sweep = app.add_subcommand("sweep-theta", "Delegate statistics per threshold (CSV)");
  add_common(*sweep, s);
  auto sweep_bound = add_run_options(*sweep, s);
  sweep->add_option("--thetas", s.thetas, "Thresholds to sweep");
  sweep->add_option("--sources", s.sources, "Sources per TEPS measurement (default 4)");
  sweep->add_flag("--timing", s.timing, "Measure TEPS per threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (gen->parsed()) {
      apply_config(s, gen_bound, s);
      return cmd_generate(s);
    }
    if (part->parsed()) {
      apply_config(s, part_bound, s);
      return cmd_partition(s);
    }
    if (run->parsed()) {
      apply_config(s, run_bound, s);
      return cmd_run(s);
    }
    if (verify->parsed()) {
      apply_config(s, verify_bound, s);
      return cmd_verify(s);
    }
    if (cost->parsed()) {
      apply_config(s, cost_bound, s);
      return cmd_cost(s);
    }
    if (mem->parsed()) {
      apply_config(s, mem_bound, s);
      return cmd_memory(s);
    }
    if (sweep->parsed()) {
      apply_config(s, sweep_bound, s);
      return cmd_sweep_theta(s);
    }
  } catch (const Violation& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
