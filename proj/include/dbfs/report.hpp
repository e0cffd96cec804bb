#pragma once

#include <string>

#include <json.hpp>

#include "dbfs/engine.hpp"
#include "dbfs/subgraph.hpp"

namespace dbfs {

nlohmann::json to_json(const Inspections& insp);
nlohmann::json to_json(const IterationComm& comm);
nlohmann::json to_json(const CommStats& stats, const PartitionedGraph& pg);
nlohmann::json to_json(const MemoryReport& report);

/// Graph-level facts a run report carries in "params".
nlohmann::json graph_params(const PartitionedGraph& pg);

/// {params, per_iteration, totals, levels_digest}; the digest is written as a
/// 16-digit lowercase hex string. Without timing the report is a pure
/// function of graph and options.
nlohmann::json run_report(const PartitionedGraph& pg, const BfsOptions& opts, const BfsRun& run,
                          bool include_timing = false);

nlohmann::json benchmark_report(const PartitionedGraph& pg, const BfsOptions& opts, const BenchmarkReport& bench);

std::string hex_digest(std::uint64_t digest);

const char* to_string(Mode mode) noexcept;
const char* to_string(DirectionScope scope) noexcept;

}  // namespace dbfs
