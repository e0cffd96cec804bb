#include "dbfs/subgraph.hpp"

#include <limits>
#include <string>

#include "dbfs/errors.hpp"

namespace dbfs {

std::uint64_t WorkerSubgraphs::nnz(SubgraphKind kind) const noexcept {
  switch (kind) {
    case SubgraphKind::nn: return nn.nnz();
    case SubgraphKind::nd: return nd.nnz();
    case SubgraphKind::dn: return dn.nnz();
    case SubgraphKind::dd: return dd.nnz();
  }
  return 0;
}

std::uint64_t PartitionedGraph::kind_total(SubgraphKind kind) const noexcept {
  std::uint64_t sum = 0;
  for (const auto& w : workers) sum += w.nnz(kind);
  return sum;
}

namespace {

LocalId narrow_local(std::uint64_t id) {
  if (id >= std::numeric_limits<LocalId>::max()) {
    throw CapacityError("partition: local id " + std::to_string(id) + " does not fit in 32 bits");
  }
  return static_cast<LocalId>(id);
}

WorkerSubgraphs build_worker(std::uint32_t w, const std::array<std::vector<Edge>, kSubgraphKinds>& kinds,
                             const VertexClassification& cls, ClusterShape shape) {
  WorkerSubgraphs out;
  out.worker = w;
  out.local_normals = shape.owned_count(cls.n(), w);
  const std::size_t normal_rows = narrow_local(out.local_normals);
  const std::size_t d = cls.d();

  auto bucket = [&](SubgraphKind k) -> const std::vector<Edge>& { return kinds[static_cast<std::size_t>(k)]; };

  {
    std::vector<std::pair<std::uint64_t, VertexId>> pairs;
    pairs.reserve(bucket(SubgraphKind::nn).size());
    for (const Edge& e : bucket(SubgraphKind::nn)) pairs.emplace_back(shape.local_id(e.src), e.dst);
    out.nn = Csr<VertexId>::from_pairs(normal_rows, pairs);
  }
  {
    std::vector<std::pair<std::uint64_t, LocalId>> pairs;
    pairs.reserve(bucket(SubgraphKind::nd).size());
    for (const Edge& e : bucket(SubgraphKind::nd)) pairs.emplace_back(shape.local_id(e.src), cls.delegate_of[e.dst]);
    out.nd = Csr<LocalId>::from_pairs(normal_rows, pairs);
  }
  {
    std::vector<std::pair<std::uint64_t, LocalId>> pairs;
    pairs.reserve(bucket(SubgraphKind::dn).size());
    for (const Edge& e : bucket(SubgraphKind::dn)) {
      pairs.emplace_back(cls.delegate_of[e.src], narrow_local(shape.local_id(e.dst)));
    }
    out.dn = Csr<LocalId>::from_pairs(d, pairs);
  }
  {
    std::vector<std::pair<std::uint64_t, DelegateId>> pairs;
    pairs.reserve(bucket(SubgraphKind::dd).size());
    for (const Edge& e : bucket(SubgraphKind::dd)) pairs.emplace_back(cls.delegate_of[e.src], cls.delegate_of[e.dst]);
    out.dd = Csr<DelegateId>::from_pairs(d, pairs);
  }

  for (std::size_t r = 0; r < out.nd.rows(); ++r) {
    if (out.nd.degree(r) > 0) out.nd_sources.push_back(static_cast<LocalId>(r));
  }
  out.dn_sources.resize(d);
  out.dd_sources.resize(d);
  for (std::size_t r = 0; r < d; ++r) {
    if (out.dn.degree(r) > 0) out.dn_sources.set(r);
    if (out.dd.degree(r) > 0) out.dd_sources.set(r);
  }
  return out;
}

}  // namespace

PartitionedGraph build_partitioned_graph(const EdgeBuckets& buckets, const VertexClassification& cls,
                                         std::uint64_t m) {
  const ClusterShape shape = buckets.shape;
  if (buckets.workers.size() != shape.workers()) {
    throw StructuralError("partition: bucket count does not match the cluster shape");
  }
  PartitionedGraph pg;
  pg.shape = shape;
  pg.n = cls.n();
  pg.m = m;
  pg.theta = cls.theta;
  pg.delegate_to_global = cls.delegate_to_global;
  pg.workers.reserve(shape.workers());
  for (std::uint32_t w = 0; w < shape.workers(); ++w) {
    pg.workers.push_back(build_worker(w, buckets.workers[w], cls, shape));
  }
  return pg;
}

PartitionedGraph partition_graph(const EdgeList& g, std::uint64_t theta, ClusterShape shape) {
  const VertexClassification cls = classify_vertices(compute_out_degrees(g), theta);
  return build_partitioned_graph(distribute_edges(g, cls, shape), cls, g.m());
}

EdgeList reconstruct_edges(const PartitionedGraph& pg) {
  EdgeList g;
  g.n = pg.n;
  g.edges.reserve(pg.m);
  const auto& shape = pg.shape;
  for (const auto& w : pg.workers) {
    auto normal = [&](std::uint64_t local) { return shape.global_id(w.worker, local); };
    auto delegate = [&](std::uint64_t id) { return pg.delegate_to_global[id]; };
    for (std::size_t r = 0; r < w.nn.rows(); ++r) {
      for (VertexId v : w.nn.row(r)) g.edges.push_back({normal(r), v});
    }
    for (std::size_t r = 0; r < w.nd.rows(); ++r) {
      for (LocalId v : w.nd.row(r)) g.edges.push_back({normal(r), delegate(v)});
    }
    for (std::size_t r = 0; r < w.dn.rows(); ++r) {
      for (LocalId v : w.dn.row(r)) g.edges.push_back({delegate(r), normal(v)});
    }
    for (std::size_t r = 0; r < w.dd.rows(); ++r) {
      for (DelegateId v : w.dd.row(r)) g.edges.push_back({delegate(r), delegate(v)});
    }
  }
  return g;
}

MemoryReport memory_footprint(const PartitionedGraph& pg) {
  MemoryReport report;
  const std::uint64_t d = pg.d();
  auto& kinds = report.kinds;
  for (const auto& w : pg.workers) {
    kinds[0].offset_bytes += 4 * w.local_normals;
    kinds[1].offset_bytes += 4 * w.local_normals;
    kinds[2].offset_bytes += 4 * d;
    kinds[3].offset_bytes += 4 * d;
    kinds[0].index_bytes += 8 * w.nn.nnz();
    kinds[1].index_bytes += 4 * w.nd.nnz();
    kinds[2].index_bytes += 4 * w.dn.nnz();
    kinds[3].index_bytes += 4 * w.dd.nnz();

    auto resident = [](const auto& csr) {
      return csr.row_offsets.capacity() * sizeof(csr.row_offsets[0]) +
             csr.col_indices.capacity() * sizeof(typename std::decay_t<decltype(csr)>::index_type);
    };
    report.resident_bytes += resident(w.nn) + resident(w.nd) + resident(w.dn) + resident(w.dd) +
                             w.nd_sources.capacity() * sizeof(LocalId) +
                             (w.dn_sources.num_blocks() + w.dd_sources.num_blocks()) * sizeof(std::uint64_t);
  }
  for (const auto& part : kinds) {
    report.offset_bytes += part.offset_bytes;
    report.index_bytes += part.index_bytes;
  }
  report.total_bytes = report.offset_bytes + report.index_bytes;
  report.edge_list_bytes = 16 * pg.m;
  report.plain_csr_bytes = 8 * pg.n + 8 * pg.m;
  if (report.edge_list_bytes > 0) {
    report.ratio_vs_edge_list = static_cast<double>(report.total_bytes) / static_cast<double>(report.edge_list_bytes);
  }
  if (report.plain_csr_bytes > 0) {
    report.ratio_vs_plain_csr = static_cast<double>(report.total_bytes) / static_cast<double>(report.plain_csr_bytes);
  }
  return report;
}

}  // namespace dbfs
