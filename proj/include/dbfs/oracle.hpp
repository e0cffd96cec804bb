#pragma once

// Brute-force reference implementations. Nothing here calls into the
// partitioner, the traversal templates, or the engine; each routine is written
// from the rules directly so it can serve as an independent check.

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "dbfs/cluster.hpp"
#include "dbfs/csr.hpp"
#include "dbfs/edge_list.hpp"
#include "dbfs/traversal.hpp"

namespace dbfs::oracle {

/// Full-graph oracles refuse inputs above this many vertices.
inline constexpr VertexId kMaxVertices = VertexId{1} << 20;

/// Queue BFS on the undirected multigraph (each edge usable both ways).
std::vector<Level> reference_bfs(const EdgeList& g, VertexId source);

struct EdgeHome {
  std::uint32_t rank = 0;
  std::uint32_t gpu = 0;
  SubgraphKind kind = SubgraphKind::nn;

  friend bool operator==(const EdgeHome&, const EdgeHome&) = default;
};

/// One edge through the edge-distributor rules, transcribed line by line.
EdgeHome distribute(const Edge& e, const std::vector<std::uint64_t>& out_degree, std::uint64_t theta,
                    ClusterShape shape);

/// Edge inspections of a single-processor direction-optimizing BFS that uses
/// one factor pair, the same FV/BV estimate, and the same switching rule.
/// Backward steps scan every unvisited vertex of nonzero degree.
std::uint64_t dobfs_inspections(const EdgeList& g, VertexId source, DirectionFactors factors,
                                bool allow_switch_back = true);

/// The per-kind variant: vertices with degree above `theta` are hubs, edges
/// are split into hub->hub, hub->normal and normal->hub (each with its own
/// factor pair, indexed like DoKind) plus normal->normal, which is always
/// pushed. This is the work of the delegate traversal run on one processor.
std::uint64_t dobfs_inspections(const EdgeList& g, VertexId source, std::uint64_t theta,
                                const std::array<DirectionFactors, kDoKinds>& factors,
                                bool allow_switch_back = true);

/// Inspections of a backward scan over `vertices` parent lists of length
/// `degree`, each parent independently newly visited with probability `a`,
/// averaged over `trials` runs.
double simulate_backward_scan(std::uint64_t vertices, std::uint64_t degree, double a, std::uint32_t trials,
                              std::uint64_t seed);

/// Counts of (u, v) in a; equal maps mean equal multisets.
bool same_multiset(std::vector<Edge> a, std::vector<Edge> b);

}  // namespace dbfs::oracle
