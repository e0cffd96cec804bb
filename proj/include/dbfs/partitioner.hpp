#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dbfs/cluster.hpp"
#include "dbfs/csr.hpp"
#include "dbfs/edge_list.hpp"

namespace dbfs {

using DelegateId = std::uint32_t;
inline constexpr DelegateId kNotDelegate = std::numeric_limits<DelegateId>::max();

using DegreeTable = std::vector<std::uint64_t>;

/// degree[v] = number of edges with src == v.
DegreeTable compute_out_degrees(const EdgeList& g);

/// Suggested threshold for an RMAT graph of the given scale: 64 at scale 30,
/// growing by sqrt(2) per scale, rounded and clamped to [16, 512].
std::uint64_t auto_theta(unsigned scale);

struct VertexClassification {
  std::uint64_t theta = 0;
  DegreeTable out_degree;
  /// kNotDelegate for normal vertices.
  std::vector<DelegateId> delegate_of;
  /// Ascending global ids.
  std::vector<VertexId> delegate_to_global;

  std::uint32_t d() const noexcept { return static_cast<std::uint32_t>(delegate_to_global.size()); }
  VertexId n() const noexcept { return out_degree.size(); }
  bool is_delegate(VertexId v) const noexcept { return delegate_of[v] != kNotDelegate; }
};

/// Delegates are exactly {v : degree(v) > theta}, numbered by ascending id.
/// Throws CapacityError if the delegate count overflows 32 bits.
VertexClassification classify_vertices(DegreeTable degrees, std::uint64_t theta);

struct Placement {
  std::uint32_t worker = 0;
  SubgraphKind kind = SubgraphKind::nn;

  friend bool operator==(const Placement&, const Placement&) = default;
};

SubgraphKind kind_of(const Edge& e, const VertexClassification& cls) noexcept;

/// Home worker of one edge: the normal source if there is one, else the
/// normal destination, else the lower out-degree endpoint, ties to min(u, v).
Placement place_edge(const Edge& e, const VertexClassification& cls, ClusterShape shape) noexcept;

/// Per-worker edges by kind; endpoints are still global ids.
struct EdgeBuckets {
  ClusterShape shape;
  std::vector<std::array<std::vector<Edge>, kSubgraphKinds>> workers;

  std::uint64_t total() const noexcept;
  std::uint64_t kind_total(SubgraphKind kind) const noexcept;
  std::uint64_t worker_total(std::uint32_t worker) const noexcept;
};

/// `g` should be symmetric; otherwise the per-worker symmetry property is lost.
EdgeBuckets distribute_edges(const EdgeList& g, const VertexClassification& cls, ClusterShape shape);

struct BucketViolation {
  std::uint32_t worker = 0;
  Edge edge;
  std::string what;
};

struct BucketReport {
  bool symmetric = true;
  bool bounded = true;
  std::uint64_t normal_bound = 0;
  std::uint64_t max_normals_per_worker = 0;
  std::uint64_t max_delegates_per_worker = 0;
  std::uint64_t min_edges = 0;
  std::uint64_t max_edges = 0;
  /// (max - min) / mean edges per worker.
  double imbalance = 0.0;
  std::vector<BucketViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Checks reversal closure of nd+dn+dd per worker, that every normal endpoint
/// of a non-nn edge (and every nn source) is owned by the worker holding the
/// edge, and the ceil(n/p) and d bounds. Balance is reported, not enforced.
BucketReport verify_buckets(const EdgeBuckets& buckets, const VertexClassification& cls);

}  // namespace dbfs
