#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "dbfs/cluster.hpp"
#include "dbfs/csr.hpp"
#include "dbfs/partitioner.hpp"

namespace dbfs {

using Bitmask = boost::dynamic_bitset<std::uint64_t>;
using LocalId = std::uint32_t;

/// Everything one worker holds.
///
///   nn: rows = local normal sources, cols = global destination ids
///   nd: rows = local normal sources, cols = delegate ids
///   dn: rows = delegate sources,     cols = local normal ids
///   dd: rows = delegate sources,     cols = delegate ids
///
/// Backward traversal reuses the reverse subgraph: a backward dn visit scans
/// nd rows starting from `nd_sources`, a backward nd visit scans dn rows over
/// `dn_sources`, and a backward dd visit scans dd rows over `dd_sources`.
struct WorkerSubgraphs {
  std::uint32_t worker = 0;
  std::uint64_t local_normals = 0;
  Csr<VertexId> nn;
  Csr<LocalId> nd;
  Csr<LocalId> dn;
  Csr<DelegateId> dd;
  std::vector<LocalId> nd_sources;
  Bitmask dn_sources;
  Bitmask dd_sources;

  std::uint64_t nnz(SubgraphKind kind) const noexcept;
  std::uint64_t edges() const noexcept { return nn.nnz() + nd.nnz() + dn.nnz() + dd.nnz(); }

  friend bool operator==(const WorkerSubgraphs&, const WorkerSubgraphs&) = default;
};

struct PartitionedGraph {
  ClusterShape shape;
  VertexId n = 0;
  std::uint64_t m = 0;
  std::uint64_t theta = 0;
  std::vector<VertexId> delegate_to_global;
  std::vector<WorkerSubgraphs> workers;

  std::uint32_t d() const noexcept { return static_cast<std::uint32_t>(delegate_to_global.size()); }
  std::uint64_t kind_total(SubgraphKind kind) const noexcept;

  /// kNotDelegate for normal vertices.
  DelegateId delegate_of(VertexId v) const noexcept {
    auto it = std::lower_bound(delegate_to_global.begin(), delegate_to_global.end(), v);
    if (it == delegate_to_global.end() || *it != v) return kNotDelegate;
    return static_cast<DelegateId>(it - delegate_to_global.begin());
  }

  friend bool operator==(const PartitionedGraph&, const PartitionedGraph&) = default;
};

/// Renumbers bucket endpoints (normals to v / p, delegates to their dense id)
/// and builds four CSRs plus source lists and masks per worker. Throws
/// CapacityError if a local or delegate id does not fit in 32 bits.
PartitionedGraph build_partitioned_graph(const EdgeBuckets& buckets, const VertexClassification& cls,
                                         std::uint64_t m);

/// Classify, distribute and build in one call.
PartitionedGraph partition_graph(const EdgeList& g, std::uint64_t theta, ClusterShape shape);

/// Global edges recovered from every worker's CSRs.
EdgeList reconstruct_edges(const PartitionedGraph& pg);

/// Byte accounting with the 4/8-byte widths of the storage model
/// (row count * 4 for offsets, 8 per nn column, 4 per other column), next to
/// the bytes the containers actually occupy.
struct MemoryReport {
  struct Part {
    std::uint64_t offset_bytes = 0;
    std::uint64_t index_bytes = 0;
  };
  std::array<Part, kSubgraphKinds> kinds{};
  std::uint64_t offset_bytes = 0;
  std::uint64_t index_bytes = 0;
  std::uint64_t total_bytes = 0;
  std::uint64_t resident_bytes = 0;
  std::uint64_t edge_list_bytes = 0;
  std::uint64_t plain_csr_bytes = 0;
  double ratio_vs_edge_list = 0.0;
  double ratio_vs_plain_csr = 0.0;
};

MemoryReport memory_footprint(const PartitionedGraph& pg);

/// One file per worker ("worker-<index>.dpg") plus nothing else; see
/// partitioned_io.cpp for the byte layout.
void save_partitioned_graph(const PartitionedGraph& pg, const std::filesystem::path& dir);
PartitionedGraph load_partitioned_graph(const std::filesystem::path& dir);

}  // namespace dbfs
