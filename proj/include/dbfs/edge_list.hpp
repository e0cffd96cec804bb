#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace dbfs {

using VertexId = std::uint64_t;

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeList {
  std::vector<Edge> edges;
  VertexId n = 0;
  bool symmetric = false;

  std::uint64_t m() const noexcept { return edges.size(); }
};

/// True when every (u, v) has a matching (v, u) with equal multiplicity.
/// Independent of the `symmetric` flag, which is only a claim.
bool has_symmetric_multiset(const EdgeList& g);

/// Edges sorted lexicographically; the canonical form for multiset comparison.
std::vector<Edge> sorted_edges(std::vector<Edge> edges);

}  // namespace dbfs
