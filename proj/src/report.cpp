#include "dbfs/report.hpp"

#include <cstdio>

namespace dbfs {

using nlohmann::json;

const char* to_string(Mode mode) noexcept { return mode == Mode::bfs ? "bfs" : "dobfs"; }

const char* to_string(DirectionScope scope) noexcept {
  return scope == DirectionScope::global ? "global" : "local";
}

std::string hex_digest(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

json to_json(const Inspections& insp) {
  json out;
  for (std::size_t k = 0; k < kSubgraphKinds; ++k) {
    const char* name = to_string(static_cast<SubgraphKind>(k));
    out["forward"][name] = insp.forward[k];
    out["backward"][name] = insp.backward[k];
  }
  out["total"] = insp.total();
  return out;
}

json to_json(const IterationComm& comm) {
  return {{"mask_reduced", comm.mask_reduced},
          {"mask_bits", comm.mask_bits},
          {"mask_bytes", comm.mask_bytes()},
          {"normal_records", comm.normal_records},
          {"normal_bytes", comm.normal_bytes()},
          {"local_records", comm.local_records},
          {"in_memory_bytes", comm.in_memory_bytes},
          {"message_count", comm.message_count},
          {"pair_count", comm.pair_count}};
}

json to_json(const CommStats& stats, const PartitionedGraph& pg) {
  const double model_mask_bytes = 2.0 * pg.d() * pg.shape.p_rank / 8.0 * stats.reductions();
  return {{"mask_bits", stats.mask_bits()},
          {"mask_bytes", stats.mask_bytes()},
          {"mask_bytes_model", model_mask_bytes},
          {"normal_records", stats.normal_records()},
          {"normal_bytes", stats.normal_bytes()},
          {"normal_bytes_bound", 4 * pg.kind_total(SubgraphKind::nn)},
          {"local_records", stats.local_records()},
          {"message_count", stats.message_count()},
          {"distinct_pairs", stats.distinct_pairs()},
          {"s_prime", stats.reductions()}};
}

json to_json(const MemoryReport& report) {
  json kinds;
  for (std::size_t k = 0; k < kSubgraphKinds; ++k) {
    kinds[to_string(static_cast<SubgraphKind>(k))] = {{"offset_bytes", report.kinds[k].offset_bytes},
                                                      {"index_bytes", report.kinds[k].index_bytes}};
  }
  return {{"kinds", kinds},
          {"offset_bytes", report.offset_bytes},
          {"index_bytes", report.index_bytes},
          {"total_bytes", report.total_bytes},
          {"resident_bytes", report.resident_bytes},
          {"edge_list_bytes", report.edge_list_bytes},
          {"plain_csr_bytes", report.plain_csr_bytes},
          {"ratio_vs_edge_list", report.ratio_vs_edge_list},
          {"ratio_vs_plain_csr", report.ratio_vs_plain_csr}};
}

json graph_params(const PartitionedGraph& pg) {
  return {{"n", pg.n},
          {"m", pg.m},
          {"theta", pg.theta},
          {"d", pg.d()},
          {"p_rank", pg.shape.p_rank},
          {"p_gpu", pg.shape.p_gpu},
          {"e_nn", pg.kind_total(SubgraphKind::nn)},
          {"e_nd", pg.kind_total(SubgraphKind::nd)},
          {"e_dn", pg.kind_total(SubgraphKind::dn)},
          {"e_dd", pg.kind_total(SubgraphKind::dd)}};
}

namespace {

json options_json(const BfsOptions& opts) {
  json factors;
  for (DoKind k : kAllDoKinds) {
    const auto& f = opts.factors[static_cast<std::size_t>(k)];
    factors[to_string(k)] = {f.to_backward, f.to_forward};
  }
  return {{"mode", to_string(opts.mode)},
          {"factors", factors},
          {"allow_switch_back", opts.allow_switch_back},
          {"direction_scope", to_string(opts.direction_scope)},
          {"local_all2all", opts.comm.local_all2all},
          {"uniquify", opts.comm.uniquify},
          {"reduction", opts.comm.reduction == ReductionMode::blocking ? "blocking" : "nonblocking"},
          {"seed", opts.seed}};
}

}  // namespace

json run_report(const PartitionedGraph& pg, const BfsOptions& opts, const BfsRun& run, bool include_timing) {
  json params = graph_params(pg);
  params["options"] = options_json(opts);
  params["source"] = run.source;

  json iterations = json::array();
  for (const auto& it : run.per_iteration) {
    json dirs;
    for (DoKind k : kAllDoKinds) dirs[to_string(k)] = it.backward_workers[static_cast<std::size_t>(k)];
    iterations.push_back({{"iteration", it.iteration},
                          {"frontier_normals", it.frontier_normals},
                          {"frontier_delegates", it.frontier_delegates},
                          {"backward_workers", dirs},
                          {"inspections", to_json(it.inspections)},
                          {"comm", to_json(it.comm)}});
  }

  json totals = {{"iterations", run.iterations},
                 {"backward_iterations", run.backward_iterations},
                 {"forward_visited", run.forward_visited},
                 {"reached", run.reached()},
                 {"inspections", to_json(run.inspections)},
                 {"delegate_parent_checks", run.delegate_parent_checks},
                 {"comm", to_json(run.comm, pg)}};
  if (include_timing) {
    totals["elapsed_seconds"] = run.elapsed_seconds;
    totals["teps"] = run.teps;
    totals["phases"] = {{"previsit", run.phases.previsit},
                        {"visit", run.phases.visit},
                        {"normal_exchange", run.phases.normal_exchange},
                        {"mask_reduction", run.phases.mask_reduction}};
  }
  if (run.oracle_inspections) totals["oracle_inspections"] = *run.oracle_inspections;

  return {{"params", params},
          {"per_iteration", iterations},
          {"totals", totals},
          {"levels_digest", hex_digest(run.levels_digest())}};
}

json benchmark_report(const PartitionedGraph& pg, const BfsOptions& opts, const BenchmarkReport& bench) {
  json runs = json::array();
  for (const auto& r : bench.runs) {
    runs.push_back({{"source", r.source},
                    {"iterations", r.iterations},
                    {"elapsed_seconds", r.elapsed_seconds},
                    {"teps", r.teps},
                    {"inspections", r.inspections.total()},
                    {"s_prime", r.comm.reductions()},
                    {"mask_bytes", r.comm.mask_bytes()},
                    {"normal_bytes", r.comm.normal_bytes()}});
  }
  json params = graph_params(pg);
  params["options"] = options_json(opts);
  return {{"params", params},
          {"runs", runs},
          {"discarded", bench.discarded},
          {"geomean_teps", bench.geomean_teps},
          {"mean_elapsed_seconds", bench.mean_elapsed},
          {"mean_phases",
           {{"previsit", bench.mean_phases.previsit},
            {"visit", bench.mean_phases.visit},
            {"normal_exchange", bench.mean_phases.normal_exchange},
            {"mask_reduction", bench.mean_phases.mask_reduction}}}};
}

}  // namespace dbfs
